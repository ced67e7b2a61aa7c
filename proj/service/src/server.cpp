#include <httplib.h>

#include "qpmut/service.hpp"

namespace qpmut::service {

Server::Server(Config config) : config_(config), service_(config), http_(std::make_unique<httplib::Server>()) {
  auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
    std::multimap<std::string, std::string> query(req.params.begin(), req.params.end());
    const Response r = service_.handle(req.method, req.path, query, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  http_->Get(R"(/.*)", dispatch);
  http_->Post(R"(/.*)", dispatch);
  // The explorer may be served from another local port.
  http_->set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  http_->Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
}

Server::~Server() { stop(); }

int Server::bind(const std::string& host, int port) {
  if (port == 0) return http_->bind_to_any_port(host);
  return http_->bind_to_port(host, port) ? port : -1;
}

void Server::listen() {
  service_.restore();
  housekeeping_ = std::jthread([this](std::stop_token stop) {
    std::mutex m;
    std::condition_variable_any cv;
    std::unique_lock lock(m);
    while (!stop.stop_requested()) {
      cv.wait_for(lock, stop, config_.snapshot_interval, [] { return false; });
      if (stop.stop_requested()) break;
      service_.expire();
      service_.snapshot();
    }
  });
  http_->listen_after_bind();
  housekeeping_.request_stop();
  if (housekeeping_.joinable()) housekeeping_.join();
  service_.snapshot();
}

void Server::stop() {
  if (http_) http_->stop();
}

}  // namespace qpmut::service
