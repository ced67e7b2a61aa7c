#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "qpmut/serialize.hpp"

namespace httplib {
class Server;
}

namespace qpmut::service {

inline constexpr int kPayloadVersion = 1;

struct Config {
  /// Empty disables persistence.
  std::filesystem::path snapshot_dir;
  std::chrono::seconds snapshot_interval{30};
  /// Idle sessions older than this are dropped (zero keeps them forever).
  std::chrono::seconds session_ttl{std::chrono::hours(24)};
  unsigned search_workers = 2;
};

struct Response {
  int status = 200;
  Json body;
};

/// Transport-independent request handling. Thread-safe.
class Service {
 public:
  explicit Service(Config config = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  Response handle(const std::string& method, const std::string& path,
                  const std::multimap<std::string, std::string>& query, const std::string& body);

  /// Writes every session to the snapshot directory.
  void snapshot();
  /// Loads sessions from the snapshot directory; returns how many.
  std::size_t restore();
  /// Drops sessions idle for longer than the TTL; returns how many.
  std::size_t expire(std::chrono::steady_clock::time_point now = std::chrono::steady_clock::now());

  std::size_t session_count() const;
  /// Blocks until no search job is queued or running.
  void wait_idle();

 private:
  struct Node {
    std::size_t id = 0;
    std::optional<std::size_t> parent;
    std::optional<VertexId> vertex;
    std::vector<VertexId> sequence;
    QPState qp;
    Json payload;
  };
  struct Session {
    std::string id;
    std::string root_spec;
    std::mutex mutex;
    std::vector<std::shared_ptr<const Node>> nodes;
    std::chrono::system_clock::time_point created;
    std::atomic<std::int64_t> accessed_ns{0};
    Json extra;  // attached to the root payload, e.g. lambda validation
  };
  struct Job {
    std::string id;
    std::string session;
    std::size_t node = 0;
    QPState root;
    std::size_t depth = 0;
    SearchLimits limits;
    std::string spec;
    std::atomic<int> state{0};  // 0 queued, 1 running, 2 done, 3 failed
    std::atomic<std::size_t> depth_done{0};
    std::atomic<std::size_t> nodes_explored{0};
    std::atomic<std::size_t> nodes_pruned{0};
    std::mutex result_mutex;
    Json result;
  };

  Response create_session(const std::string& body);
  Response tree(Session& s);
  Response node(Session& s, std::size_t n);
  Response mutate(Session& s, std::size_t n, const std::string& body);
  Response start_search(Session& s, std::size_t n, const std::string& body);
  Response poll(const std::string& job);
  Response dims(Session& s, std::size_t n, const std::multimap<std::string, std::string>& query, bool hh0);

  std::shared_ptr<Session> find_session(const std::string& id);
  std::shared_ptr<const Node> find_node(Session& s, std::size_t n);
  std::string new_token();
  void touch(Session& s);
  void worker_loop(std::stop_token stop);
  Json session_snapshot(Session& s);
  void load_snapshot(const Json& j);

  Config config_;
  mutable std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::mutex jobs_mutex_;
  std::condition_variable_any jobs_cv_;
  std::condition_variable_any idle_cv_;
  std::map<std::string, std::shared_ptr<Job>> jobs_;
  std::deque<std::shared_ptr<Job>> queue_;
  std::size_t running_ = 0;
  std::mutex token_mutex_;
  std::mt19937_64 rng_;
  std::vector<std::jthread> workers_;
};

/// Node payload for a state reached from `parent` by mutating at `vertex`.
Json node_payload(const QPState& qp, std::size_t id, const std::optional<std::size_t>& parent,
                  const std::optional<VertexId>& vertex, const std::vector<VertexId>& sequence,
                  const QPState* parent_qp);

/// HTTP front end with periodic snapshots and expiry.
class Server {
 public:
  explicit Server(Config config);
  ~Server();

  /// Binds; port 0 picks a free port. Returns the bound port or -1.
  int bind(const std::string& host, int port);
  /// Serves until stop(); snapshots on the way out.
  void listen();
  void stop();
  Service& service() { return service_; }

 private:
  Config config_;
  Service service_;
  std::unique_ptr<httplib::Server> http_;
  std::jthread housekeeping_;
};

}  // namespace qpmut::service
