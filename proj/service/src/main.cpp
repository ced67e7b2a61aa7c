#include <CLI11.hpp>

#include <csignal>
#include <iostream>

#include "qpmut/service.hpp"

namespace {
qpmut::service::Server* active = nullptr;
void on_signal(int) {
  if (active) active->stop();
}
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HTTP service for the qpmut explorer", "qpmut-serve"};
  std::string host = "127.0.0.1";
  int port = 8737;
  std::string snapshot_dir;
  int interval = 30;
  int ttl = 24 * 3600;
  unsigned workers = 2;
  app.add_option("--host", host, "bind address (loopback by default)");
  app.add_option("--port", port, "port, 0 for any free port");
  app.add_option("--snapshot-dir", snapshot_dir, "directory for session snapshots");
  app.add_option("--snapshot-interval", interval, "seconds between snapshots")->check(CLI::PositiveNumber);
  app.add_option("--ttl", ttl, "idle session lifetime in seconds, 0 keeps sessions")->check(CLI::NonNegativeNumber);
  app.add_option("--workers", workers, "search worker threads")->check(CLI::Range(1u, 64u));
  CLI11_PARSE(app, argc, argv);

  qpmut::service::Config config;
  config.snapshot_dir = snapshot_dir;
  config.snapshot_interval = std::chrono::seconds(interval);
  config.session_ttl = std::chrono::seconds(ttl);
  config.search_workers = workers;
  qpmut::service::Server server(config);
  const int bound = server.bind(host, port);
  if (bound < 0) {
    std::cerr << "qpmut-serve: cannot bind " << host << ":" << port << "\n";
    return 1;
  }
  std::cerr << "qpmut-serve: listening on " << host << ":" << bound << "\n";
  active = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.listen();
  active = nullptr;
  return 0;
}
