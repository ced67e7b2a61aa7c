#include "qpmut/search.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <sstream>

#include "parallel.hpp"
#include "qpmut/error.hpp"

namespace qpmut {

const char* to_string(SearchStatus status) {
  switch (status) {
    case SearchStatus::Clean: return "clean";
    case SearchStatus::Witness: return "witness";
    case SearchStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::optional<Witness> find_degeneracy(const Quiver& quiver) {
  for (const auto& a : quiver.arrows()) {
    if (a.is_loop()) {
      Witness w;
      w.is_loop = true;
      w.u = w.v = a.source;
      w.a = w.b = a.id;
      return w;
    }
    for (const auto& b : quiver.arrows()) {
      if (b.source == a.target && b.target == a.source) {
        Witness w;
        w.u = a.source;
        w.v = a.target;
        w.a = a.id;
        w.b = b.id;
        return w;
      }
    }
  }
  return std::nullopt;
}

namespace {

using Clock = std::chrono::steady_clock;

QPState with_cap(const QPState& qp, std::size_t cap) {
  QPState out = qp;
  Potential w(cap);
  w.set_exact(qp.potential.exact());
  for (const auto& [word, c] : qp.potential.terms()) w.add(word, c);
  out.potential = std::move(w);
  if (!out.potential.exact()) {
    out.faithful_horizon = out.faithful_horizon ? std::min(*out.faithful_horizon, cap) : cap;
  } else if (out.faithful_horizon) {
    out.faithful_horizon = std::min(*out.faithful_horizon, cap);
  }
  return out;
}

struct Child {
  bool computed = false;
  QPState state;
  CanonicalKey key;
  std::optional<Witness> degeneracy;
  std::optional<ObstructionCertificate> certificate;
};

bool reliable(const std::optional<std::size_t>& horizon) {
  return !horizon || *horizon >= kMinFaithfulHorizon;
}

}  // namespace

SearchReport explore(const QPState& root, std::size_t depth, const SearchLimits& limits, std::string root_spec,
                     const ProgressCallback& progress) {
  const auto start = Clock::now();
  if (auto d = find_degeneracy(root.quiver)) {
    throw Error(ErrorKind::MutationUndefined, d->is_loop ? "root has a loop" : "root has a two-cycle");
  }
  const auto out_of_time = [&] {
    return limits.time_cap.count() > 0 && Clock::now() - start >= limits.time_cap;
  };

  SearchReport report;
  report.root_spec = std::move(root_spec);
  report.depth_requested = depth;

  std::vector<QPState> states;  // parallel to report.nodes; cleared once a node is expanded
  std::map<std::pair<std::string, std::optional<std::size_t>>, std::size_t> visited;

  {
    QPState s = with_cap(root, limits.length_cap);
    SearchNode node;
    node.arrow_count = s.quiver.arrows().size();
    node.exact = s.potential.exact();
    node.faithful_horizon = s.faithful_horizon;
    node.key = canonical_key(s);
    visited.emplace(std::pair{node.key.form, node.faithful_horizon}, 0);
    report.nodes.push_back(std::move(node));
    states.push_back(std::move(s));
  }
  std::vector<std::size_t> frontier{0};
  std::string stop_reason;

  auto publish = [&](std::size_t level) {
    if (progress) progress({level, report.nodes.size(), report.nodes_pruned});
  };

  for (std::size_t level = 0; level < depth && !frontier.empty() && stop_reason.empty(); ++level) {
    // Nodes whose horizon is too short cannot vouch for their children.
    std::vector<std::size_t> expandable;
    for (std::size_t id : frontier) {
      if (reliable(report.nodes[id].faithful_horizon)) {
        expandable.push_back(id);
      } else {
        report.nodes[id].inconclusive = true;
        states[id] = {};
      }
    }
    std::stable_sort(expandable.begin(), expandable.end(),
                     [&](std::size_t x, std::size_t y) { return report.nodes[x].key < report.nodes[y].key; });

    struct Task {
      std::size_t parent;
      VertexId vertex;
    };
    std::vector<Task> tasks;
    for (std::size_t id : expandable) {
      for (const auto& v : states[id].quiver.vertices()) tasks.push_back({id, v.id});
    }

    std::vector<Child> children(tasks.size());
    std::atomic<bool> timed_out{false};
    detail::parallel_for(tasks.size(), limits.threads, [&](std::size_t k) {
      if (timed_out || out_of_time()) {
        timed_out = true;
        return;
      }
      const QPState& parent = states[tasks[k].parent];
      auto [pre, pre_report] = premutate(parent, tasks[k].vertex);
      Child c;
      c.state = reduce(pre).first;
      c.degeneracy = find_degeneracy(c.state.quiver);
      if (c.degeneracy) {
        try {
          c.certificate = degree_obstruction(pre);
        } catch (const Error&) {
          // inhomogeneous potential: no certificate
        }
      } else {
        c.key = canonical_key(c.state);
      }
      c.computed = true;
      children[k] = std::move(c);
    });

    for (std::size_t k = 0; k < tasks.size(); ++k) {
      Child& c = children[k];
      if (!c.computed) {
        stop_reason = "time cap reached";
        break;
      }
      if (report.nodes.size() >= limits.node_cap) {
        stop_reason = "node cap reached";
        break;
      }
      const SearchNode& parent = report.nodes[tasks[k].parent];
      SearchNode node;
      node.id = report.nodes.size();
      node.parent = parent.id;
      node.vertex = tasks[k].vertex;
      node.sequence = parent.sequence;
      node.sequence.push_back(tasks[k].vertex);
      node.depth = parent.depth + 1;
      node.arrow_count = c.state.quiver.arrows().size();
      node.exact = c.state.potential.exact();
      node.faithful_horizon = c.state.faithful_horizon;

      if (c.degeneracy) {
        Witness w = *c.degeneracy;
        w.sequence = node.sequence;
        w.certificate = std::move(c.certificate);
        report.witness = std::move(w);
        report.nodes.push_back(std::move(node));
        break;
      }

      node.key = c.key;
      if (limits.prune) {
        auto [it, inserted] = visited.try_emplace(std::pair{c.key.form, node.faithful_horizon}, node.id);
        if (!inserted) {
          report.pruned_edges.push_back({parent.id, tasks[k].vertex, it->second});
          ++report.nodes_pruned;
          continue;
        }
      }
      report.nodes.push_back(std::move(node));
      states.push_back(std::move(c.state));
    }

    if (report.witness) {
      report.depth_reached = level + 1;
      break;
    }
    for (std::size_t id : expandable) states[id] = {};
    frontier.clear();
    for (std::size_t id = 0; id < report.nodes.size(); ++id) {
      if (report.nodes[id].depth == level + 1) frontier.push_back(id);
    }
    if (stop_reason.empty()) report.depth_reached = level + 1;
    publish(level + 1);
  }

  bool inconclusive_nodes = false;
  for (const auto& n : report.nodes) {
    report.all_exact = report.all_exact && n.exact;
    inconclusive_nodes = inconclusive_nodes || n.inconclusive;
  }
  report.nodes_explored = report.nodes.size();
  if (report.witness) {
    report.status = SearchStatus::Witness;
  } else if (!stop_reason.empty()) {
    report.status = SearchStatus::Inconclusive;
    report.inconclusive_reason = stop_reason;
  } else if (inconclusive_nodes) {
    report.status = SearchStatus::Inconclusive;
    report.inconclusive_reason = "faithful horizon below " + std::to_string(kMinFaithfulHorizon) +
                                 " at some node; raise the length cap";
  } else {
    report.status = SearchStatus::Clean;
  }
  report.wall_time = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
  return report;
}

std::string to_dot(const SearchReport& report) {
  std::ostringstream out;
  out << "digraph mutations {\n  node [shape=box, fontname=\"monospace\"];\n";
  const std::vector<VertexId>* witness_seq = report.witness ? &report.witness->sequence : nullptr;
  for (const auto& n : report.nodes) {
    out << "  n" << n.id << " [label=\"[";
    for (std::size_t k = 0; k < n.sequence.size(); ++k) out << (k ? " " : "") << n.sequence[k];
    out << "]\\n" << n.arrow_count << " arrows";
    if (!n.exact) out << ", h=" << (n.faithful_horizon ? std::to_string(*n.faithful_horizon) : "inf");
    out << "\"";
    if (witness_seq && n.sequence == *witness_seq) {
      out << ", color=red, penwidth=2";
    } else if (n.inconclusive) {
      out << ", color=orange";
    }
    out << "];\n";
  }
  for (const auto& n : report.nodes) {
    if (n.parent) out << "  n" << *n.parent << " -> n" << n.id << " [label=\"" << *n.vertex << "\"];\n";
  }
  for (const auto& e : report.pruned_edges) {
    out << "  n" << e.parent << " -> n" << e.merged_into << " [label=\"" << e.vertex << "\", style=dashed];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace qpmut
