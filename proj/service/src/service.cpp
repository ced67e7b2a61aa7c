#include "qpmut/service.hpp"

#include <fstream>
#include <sstream>

#include "qpmut/error.hpp"

namespace qpmut::service {

namespace {

using SteadyClock = std::chrono::steady_clock;

std::int64_t now_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(SteadyClock::now().time_since_epoch()).count();
}

Response error(int status, std::string code, std::string message, Json detail = nullptr) {
  return {status, Json{{"v", kPayloadVersion}, {"code", std::move(code)}, {"message", std::move(message)},
                       {"detail", std::move(detail)}}};
}

Response from_error(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Parse: return error(400, "parse_error", e.what());
    case ErrorKind::VertexAbsent: return error(400, "vertex_absent", e.what());
    case ErrorKind::ArrowAbsent: return error(400, "arrow_absent", e.what());
    case ErrorKind::MutationUndefined: return error(409, "mutation_undefined", e.what());
    case ErrorKind::NotHomogeneous: return error(422, "not_homogeneous", e.what());
    case ErrorKind::NonPositiveGrading: return error(422, "non_positive_grading", e.what());
    case ErrorKind::LoopsNotRemovable: return error(422, "loops_not_removable", e.what());
    default: return error(400, "invalid_argument", e.what());
  }
}

Response not_found(const std::string& what) { return error(404, "not_found", what + " not found"); }

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> out;
  std::string part;
  std::istringstream in(path);
  while (std::getline(in, part, '/'))
    if (!part.empty()) out.push_back(part);
  return out;
}

std::optional<std::size_t> parse_index(const std::string& s) {
  if (s.empty() || s.size() > 12) return std::nullopt;
  std::size_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + static_cast<std::size_t>(c - '0');
  }
  return v;
}

Json parse_body(const std::string& body) {
  if (body.empty()) return Json::object();
  Json j = parse_json_text(body);
  if (!j.is_object()) throw Error(ErrorKind::Parse, "request body must be a JSON object");
  return j;
}

template <class T>
T body_number(const Json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
    throw Error(ErrorKind::Parse, std::string("field '") + key + "' must be a non-negative integer");
  }
  return static_cast<T>(it->get<std::int64_t>());
}

}  // namespace

Json node_payload(const QPState& qp, std::size_t id, const std::optional<std::size_t>& parent,
                  const std::optional<VertexId>& vertex, const std::vector<VertexId>& sequence,
                  const QPState* parent_qp) {
  const Quiver& q = qp.quiver;
  Json j;
  j["v"] = kPayloadVersion;
  j["node"] = id;
  j["parent"] = parent ? Json(*parent) : Json(nullptr);
  j["vertex"] = vertex ? Json(*vertex) : Json(nullptr);
  j["sequence"] = sequence;
  j["qp"] = to_json(qp);

  Json loop_ids = Json::array();
  for (ArrowId a : loops(q)) loop_ids.push_back(a);
  Json cycles = Json::array();
  for (const auto& [a, b] : two_cycles(q)) {
    cycles.push_back({{"u", q.arrow(a).source}, {"v", q.arrow(a).target}, {"a", a}, {"b", b}});
  }
  j["highlights"] = {{"loops", std::move(loop_ids)}, {"two_cycles", std::move(cycles)}};
  Json mutable_vertices = Json::array();
  for (const auto& v : q.vertices())
    if (!blocks_mutation(q, v.id)) mutable_vertices.push_back(v.id);
  j["mutable_vertices"] = std::move(mutable_vertices);

  Json diff = nullptr;
  Json certificate = nullptr;
  if (parent_qp && vertex) {
    const Quiver& p = parent_qp->quiver;
    Json added = Json::array(), removed = Json::array(), reversed = Json::array();
    for (const auto& a : q.arrows()) {
      const Arrow* old = p.find_arrow(a.id);
      if (!old) {
        added.push_back(a.id);
      } else if (old->source != a.source || old->target != a.target) {
        reversed.push_back(a.id);
      }
    }
    for (const auto& a : p.arrows())
      if (!q.has_arrow(a.id)) removed.push_back(a.id);
    diff = {{"added", std::move(added)}, {"removed", std::move(removed)}, {"reversed", std::move(reversed)}};
    try {
      if (auto cert = degree_obstruction(premutate(*parent_qp, *vertex).first)) certificate = to_json(*cert);
    } catch (const Error&) {
      // no homogeneous grading, so no certificate
    }
  }
  j["diff"] = std::move(diff);
  j["certificate"] = std::move(certificate);
  return j;
}

// ---------------------------------------------------------------- Service

Service::Service(Config config) : config_(std::move(config)), rng_(std::random_device{}()) {
  const unsigned n = std::max(1u, config_.search_workers);
  for (unsigned k = 0; k < n; ++k) {
    workers_.emplace_back([this](std::stop_token stop) { worker_loop(stop); });
  }
}

Service::~Service() {
  for (auto& w : workers_) w.request_stop();
  jobs_cv_.notify_all();
  workers_.clear();
}

std::string Service::new_token() {
  std::lock_guard lock(token_mutex_);
  std::ostringstream out;
  out << std::hex << rng_() << rng_();
  return out.str();
}

void Service::touch(Session& s) { s.accessed_ns = now_ns(); }

std::size_t Service::session_count() const {
  std::lock_guard lock(sessions_mutex_);
  return sessions_.size();
}

std::shared_ptr<Service::Session> Service::find_session(const std::string& id) {
  std::lock_guard lock(sessions_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return nullptr;
  touch(*it->second);
  return it->second;
}

std::shared_ptr<const Service::Node> Service::find_node(Session& s, std::size_t n) {
  std::lock_guard lock(s.mutex);
  return n < s.nodes.size() ? s.nodes[n] : nullptr;
}

Response Service::handle(const std::string& method, const std::string& path,
                         const std::multimap<std::string, std::string>& query, const std::string& body) {
  try {
    const auto parts = split_path(path);
    if (parts.empty()) return not_found("route");
    if (parts[0] == "sessions") {
      if (parts.size() == 1) {
        if (method != "POST") return error(405, "method_not_allowed", "use POST");
        return create_session(body);
      }
      auto s = find_session(parts[1]);
      if (!s) return not_found("session");
      if (parts.size() == 3 && parts[2] == "tree" && method == "GET") return tree(*s);
      if (parts.size() < 4 || parts[2] != "nodes") return not_found("route");
      const auto n = parse_index(parts[3]);
      if (!n) return not_found("node");
      if (parts.size() == 4 && method == "GET") return node(*s, *n);
      if (parts.size() == 5) {
        if (parts[4] == "mutate" && method == "POST") return mutate(*s, *n, body);
        if (parts[4] == "search" && method == "POST") return start_search(*s, *n, body);
        if (parts[4] == "dims" && method == "GET") return dims(*s, *n, query, false);
        if (parts[4] == "hh0" && method == "GET") return dims(*s, *n, query, true);
      }
      return not_found("route");
    }
    if (parts[0] == "jobs" && parts.size() == 2 && method == "GET") return poll(parts[1]);
    return not_found("route");
  } catch (const Error& e) {
    return from_error(e);
  } catch (const std::exception& e) {
    return error(500, "internal", e.what());
  }
}

Response Service::create_session(const std::string& body) {
  const Json req = parse_body(body);
  const std::size_t cap = body_number<std::size_t>(req, "length_cap", default_length_cap());
  auto s = std::make_shared<Session>();
  QPState root;
  if (auto it = req.find("spec"); it != req.end()) {
    if (!it->is_string()) throw Error(ErrorKind::Parse, "field 'spec' must be a string");
    const auto spec = parse_generator_spec(it->get<std::string>());
    root = generate(spec, cap);
    s->root_spec = it->get<std::string>();
    if (const auto* p = std::get_if<PreprojectiveSpec>(&spec)) s->extra["lambda"] = to_json(validate_lambda(*p));
  } else if (auto qp = req.find("qp"); qp != req.end()) {
    root = qp_from_json(*qp);
  } else {
    throw Error(ErrorKind::Parse, "body needs 'spec' or 'qp'");
  }
  s->id = new_token();
  s->created = std::chrono::system_clock::now();
  touch(*s);
  auto n = std::make_shared<Node>();
  n->qp = std::move(root);
  n->payload = node_payload(n->qp, 0, std::nullopt, std::nullopt, {}, nullptr);
  s->nodes.push_back(n);

  Json out{{"v", kPayloadVersion}, {"session", s->id}, {"root", n->payload}};
  if (!s->extra.empty()) out["lambda"] = s->extra["lambda"];
  {
    std::lock_guard lock(sessions_mutex_);
    sessions_.emplace(s->id, s);
  }
  return {201, std::move(out)};
}

Response Service::tree(Session& s) {
  std::lock_guard lock(s.mutex);
  Json nodes = Json::array();
  for (const auto& n : s.nodes) {
    nodes.push_back({{"node", n->id},
                     {"parent", n->parent ? Json(*n->parent) : Json(nullptr)},
                     {"vertex", n->vertex ? Json(*n->vertex) : Json(nullptr)},
                     {"sequence", n->sequence},
                     {"arrow_count", n->qp.quiver.arrows().size()},
                     {"two_cycles", n->payload["highlights"]["two_cycles"].size()},
                     {"loops", n->payload["highlights"]["loops"].size()}});
  }
  return {200, Json{{"v", kPayloadVersion}, {"session", s.id}, {"root_spec", s.root_spec}, {"nodes", std::move(nodes)}}};
}

Response Service::node(Session& s, std::size_t n) {
  auto node = find_node(s, n);
  if (!node) return not_found("node");
  return {200, node->payload};
}

Response Service::mutate(Session& s, std::size_t n, const std::string& body) {
  const Json req = parse_body(body);
  auto it = req.find("vertex");
  if (it == req.end() || !it->is_number_integer()) throw Error(ErrorKind::Parse, "body needs an integer 'vertex'");
  const auto vertex = it->get<std::int64_t>();
  if (vertex < INT32_MIN || vertex > INT32_MAX) throw Error(ErrorKind::VertexAbsent, "vertex absent");
  const auto v = static_cast<VertexId>(vertex);

  // Mutations of one session are serialized; existing nodes are never touched.
  std::lock_guard lock(s.mutex);
  if (n >= s.nodes.size()) return not_found("node");
  const auto parent = s.nodes[n];
  auto child = std::make_shared<Node>();
  child->qp = qpmut::mutate(parent->qp, v).first;
  child->id = s.nodes.size();
  child->parent = n;
  child->vertex = v;
  child->sequence = parent->sequence;
  child->sequence.push_back(v);
  child->payload = node_payload(child->qp, child->id, n, v, child->sequence, &parent->qp);
  s.nodes.push_back(child);
  return {201, child->payload};
}

Response Service::start_search(Session& s, std::size_t n, const std::string& body) {
  const Json req = parse_body(body);
  auto node = find_node(s, n);
  if (!node) return not_found("node");
  auto job = std::make_shared<Job>();
  job->id = new_token();
  job->session = s.id;
  job->node = n;
  job->root = node->qp;
  job->depth = body_number<std::size_t>(req, "depth", 1);
  job->limits.node_cap = body_number<std::size_t>(req, "node_cap", job->limits.node_cap);
  job->limits.time_cap = std::chrono::milliseconds(body_number<std::int64_t>(req, "time_cap_ms", 0));
  job->limits.length_cap = body_number<std::size_t>(
      req, "length_cap", node->qp.potential.length_cap().value_or(default_length_cap()));
  job->limits.threads = std::max(1u, body_number<unsigned>(req, "threads", 1));
  if (auto p = req.find("prune"); p != req.end() && p->is_boolean()) job->limits.prune = p->get<bool>();
  job->spec = s.root_spec;
  {
    std::lock_guard lock(jobs_mutex_);
    jobs_.emplace(job->id, job);
    queue_.push_back(job);
  }
  jobs_cv_.notify_one();
  return {202, Json{{"v", kPayloadVersion}, {"job", job->id}}};
}

void Service::worker_loop(std::stop_token stop) {
  for (;;) {
    std::shared_ptr<Job> job;
    {
      std::unique_lock lock(jobs_mutex_);
      if (!jobs_cv_.wait(lock, stop, [&] { return !queue_.empty(); })) return;
      job = queue_.front();
      queue_.pop_front();
      ++running_;
    }
    job->state = 1;
    Json result;
    int final_state = 2;
    try {
      const SearchReport r = explore(job->root, job->depth, job->limits, job->spec, [&](const SearchProgress& p) {
        job->depth_done = p.depth;
        job->nodes_explored = p.nodes_explored;
        job->nodes_pruned = p.nodes_pruned;
      });
      job->nodes_explored = r.nodes_explored;
      job->nodes_pruned = r.nodes_pruned;
      job->depth_done = r.depth_reached;
      result = to_json(r);
    } catch (const Error& e) {
      result = from_error(e).body;
      final_state = 3;
    } catch (const std::exception& e) {
      result = error(500, "internal", e.what()).body;
      final_state = 3;
    }
    {
      std::lock_guard lock(job->result_mutex);
      job->result = std::move(result);
    }
    job->state = final_state;
    {
      std::lock_guard lock(jobs_mutex_);
      --running_;
    }
    idle_cv_.notify_all();
  }
}

void Service::wait_idle() {
  std::unique_lock lock(jobs_mutex_);
  idle_cv_.wait(lock, [&] { return queue_.empty() && running_ == 0; });
}

Response Service::poll(const std::string& id) {
  std::shared_ptr<Job> job;
  {
    std::lock_guard lock(jobs_mutex_);
    auto it = jobs_.find(id);
    if (it == jobs_.end()) return not_found("job");
    job = it->second;
  }
  static const char* names[] = {"queued", "running", "done", "failed"};
  const int state = job->state;
  Json out{{"v", kPayloadVersion},
           {"job", job->id},
           {"session", job->session},
           {"node", job->node},
           {"state", names[state]},
           {"progress",
            {{"depth", job->depth_done.load()},
             {"nodes_explored", job->nodes_explored.load()},
             {"nodes_pruned", job->nodes_pruned.load()}}}};
  if (state >= 2) {
    std::lock_guard lock(job->result_mutex);
    out[state == 2 ? "report" : "error"] = job->result;
  }
  return {200, std::move(out)};
}

Response Service::dims(Session& s, std::size_t n, const std::multimap<std::string, std::string>& query, bool hh0) {
  auto node = find_node(s, n);
  if (!node) return not_found("node");
  std::int64_t max = 4;
  if (auto it = query.find("max"); it != query.end()) {
    const auto v = parse_index(it->second);
    if (!v || *v > 64) throw Error(ErrorKind::Parse, "query parameter 'max' must be an integer in [0, 64]");
    max = static_cast<std::int64_t>(*v);
  }
  QPState qp = node->qp;
  if (auto it = query.find("grading"); it != query.end() && it->second == "length") qp = with_length_grading(qp);
  const DimensionTable t = hh0 ? hh0_dims(qp, max, {}) : graded_dims(qp, max, {});
  Json out = to_json(t);
  out["v"] = kPayloadVersion;
  out["node"] = n;
  return {200, std::move(out)};
}

// ------------------------------------------------------------ persistence

Json Service::session_snapshot(Session& s) {
  std::lock_guard lock(s.mutex);
  Json edges = Json::array();
  for (const auto& n : s.nodes) {
    if (n->parent) edges.push_back({{"node", n->id}, {"parent", *n->parent}, {"vertex", *n->vertex}});
  }
  return Json{{"v", kPayloadVersion},
              {"session", s.id},
              {"root_spec", s.root_spec},
              {"created", std::chrono::duration_cast<std::chrono::seconds>(s.created.time_since_epoch()).count()},
              {"extra", s.extra},
              {"root", to_json(s.nodes.front()->qp)},
              {"edges", std::move(edges)}};
}

void Service::snapshot() {
  if (config_.snapshot_dir.empty()) return;
  std::filesystem::create_directories(config_.snapshot_dir);
  std::vector<std::shared_ptr<Session>> all;
  {
    std::lock_guard lock(sessions_mutex_);
    for (const auto& [id, s] : sessions_) all.push_back(s);
  }
  for (const auto& s : all) {
    const auto path = config_.snapshot_dir / (s->id + ".json");
    const auto tmp = config_.snapshot_dir / (s->id + ".json.tmp");
    {
      std::ofstream f(tmp);
      f << dump(session_snapshot(*s));
    }
    std::filesystem::rename(tmp, path);
  }
}

void Service::load_snapshot(const Json& j) {
  auto s = std::make_shared<Session>();
  s->id = j.at("session").get<std::string>();
  s->root_spec = j.value("root_spec", "");
  s->created = std::chrono::system_clock::time_point(std::chrono::seconds(j.value("created", std::int64_t{0})));
  s->extra = j.value("extra", Json::object());
  touch(*s);
  auto root = std::make_shared<Node>();
  root->qp = qp_from_json(j.at("root"));
  root->payload = node_payload(root->qp, 0, std::nullopt, std::nullopt, {}, nullptr);
  s->nodes.push_back(root);
  // Nodes are replayed from the root rather than trusted from disk.
  for (const auto& e : j.at("edges")) {
    const auto parent_id = e.at("parent").get<std::size_t>();
    if (parent_id >= s->nodes.size()) throw Error(ErrorKind::Parse, "snapshot edge to a later node");
    const auto& parent = s->nodes[parent_id];
    auto n = std::make_shared<Node>();
    n->id = s->nodes.size();
    n->parent = parent_id;
    n->vertex = e.at("vertex").get<VertexId>();
    n->sequence = parent->sequence;
    n->sequence.push_back(*n->vertex);
    n->qp = qpmut::mutate(parent->qp, *n->vertex).first;
    n->payload = node_payload(n->qp, n->id, parent_id, n->vertex, n->sequence, &parent->qp);
    s->nodes.push_back(std::move(n));
  }
  std::lock_guard lock(sessions_mutex_);
  sessions_[s->id] = std::move(s);
}

std::size_t Service::restore() {
  if (config_.snapshot_dir.empty() || !std::filesystem::is_directory(config_.snapshot_dir)) return 0;
  std::size_t count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(config_.snapshot_dir)) {
    if (entry.path().extension() != ".json") continue;
    std::ifstream f(entry.path());
    std::stringstream text;
    text << f.rdbuf();
    try {
      load_snapshot(parse_json_text(text.str()));
      ++count;
    } catch (const std::exception&) {
      // a corrupt snapshot should not keep the server down
    }
  }
  return count;
}

std::size_t Service::expire(SteadyClock::time_point now) {
  if (config_.session_ttl.count() == 0) return 0;
  const auto cutoff =
      std::chrono::duration_cast<std::chrono::nanoseconds>((now - config_.session_ttl).time_since_epoch()).count();
  std::vector<std::string> dropped;
  {
    std::lock_guard lock(sessions_mutex_);
    for (auto it = sessions_.begin(); it != sessions_.end();) {
      if (it->second->accessed_ns < cutoff) {
        dropped.push_back(it->first);
        it = sessions_.erase(it);
      } else {
        ++it;
      }
    }
  }
  if (!config_.snapshot_dir.empty()) {
    for (const auto& id : dropped) {
      std::error_code ec;
      std::filesystem::remove(config_.snapshot_dir / (id + ".json"), ec);
    }
  }
  return dropped.size();
}

}  // namespace qpmut::service
