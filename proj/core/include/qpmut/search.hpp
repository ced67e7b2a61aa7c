#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qpmut/canonical.hpp"
#include "qpmut/mutation.hpp"

namespace qpmut {

/// Below this horizon a node cannot vouch for its children's quadratic parts.
inline constexpr std::size_t kMinFaithfulHorizon = 4;

struct SearchLimits {
  std::size_t node_cap = 100000;
  /// Zero means no time limit.
  std::chrono::milliseconds time_cap{0};
  std::size_t length_cap = kDefaultLengthCap;
  unsigned threads = 1;
  bool prune = true;
};

struct SearchProgress {
  std::size_t depth = 0;
  std::size_t nodes_explored = 0;
  std::size_t nodes_pruned = 0;
};

enum class SearchStatus { Clean, Witness, Inconclusive };
const char* to_string(SearchStatus status);

struct Witness {
  std::vector<VertexId> sequence;
  bool is_loop = false;
  VertexId u = 0;
  VertexId v = 0;
  ArrowId a = 0;
  ArrowId b = 0;  // equals `a` for a loop
  std::optional<ObstructionCertificate> certificate;
};

struct SearchNode {
  std::size_t id = 0;
  std::optional<std::size_t> parent;
  std::optional<VertexId> vertex;
  std::vector<VertexId> sequence;
  std::size_t depth = 0;
  std::size_t arrow_count = 0;
  bool exact = true;
  std::optional<std::size_t> faithful_horizon;
  bool inconclusive = false;
  CanonicalKey key;
};

/// Child edge that was merged into an already visited node.
struct PrunedEdge {
  std::size_t parent;
  VertexId vertex;
  std::size_t merged_into;
};

struct SearchReport {
  std::string root_spec;
  std::size_t depth_requested = 0;
  std::size_t depth_reached = 0;
  std::size_t nodes_explored = 0;
  std::size_t nodes_pruned = 0;
  SearchStatus status = SearchStatus::Clean;
  std::optional<Witness> witness;
  std::string inconclusive_reason;
  bool all_exact = true;
  std::chrono::milliseconds wall_time{0};
  std::vector<SearchNode> nodes;
  std::vector<PrunedEdge> pruned_edges;
};

using ProgressCallback = std::function<void(const SearchProgress&)>;

/// Breadth-first exploration of the mutation class to `depth`. Throws
/// Error(MutationUndefined) when the root has a loop or a two-cycle.
SearchReport explore(const QPState& root, std::size_t depth, const SearchLimits& limits = {},
                     std::string root_spec = {}, const ProgressCallback& progress = {});

/// Loop or two-cycle in `quiver`, first by arrow id, if any.
std::optional<Witness> find_degeneracy(const Quiver& quiver);

/// Mutation tree in DOT format.
std::string to_dot(const SearchReport& report);

}  // namespace qpmut
