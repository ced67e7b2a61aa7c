#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qpmut/degree.hpp"

namespace qpmut {

using VertexId = int;
using ArrowId = int;

struct Vertex {
  VertexId id = 0;
  std::string label;

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

struct Arrow {
  ArrowId id = 0;
  std::string name;
  VertexId source = 0;
  VertexId target = 0;
  Degree degree;

  bool is_loop() const { return source == target; }
  friend bool operator==(const Arrow&, const Arrow&) = default;
};

/// Grading by Z^rank; `potential_degree` is the degree r the potential is
/// expected to be homogeneous of.
struct Grading {
  std::size_t rank = 0;
  Degree potential_degree;

  friend bool operator==(const Grading&, const Grading&) = default;
};

/// Finite directed multigraph with graded arrows. Vertices and arrows are kept
/// sorted by id; ids need not be contiguous.
class Quiver {
 public:
  Quiver() = default;
  explicit Quiver(Grading grading);

  const Grading& grading() const { return grading_; }
  std::span<const Vertex> vertices() const { return vertices_; }
  std::span<const Arrow> arrows() const { return arrows_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t arrow_count() const { return arrows_.size(); }

  bool has_vertex(VertexId v) const;
  bool has_arrow(ArrowId a) const;
  const Vertex& vertex(VertexId v) const;
  const Arrow& arrow(ArrowId a) const;
  const Arrow* find_arrow(ArrowId a) const;

  /// One past the largest arrow id in use.
  ArrowId next_arrow_id() const;

  void add_vertex(VertexId id, std::string label);
  /// Inserts an arrow with an explicit id. Validates endpoints, id uniqueness
  /// and degree rank.
  void add_arrow(Arrow arrow);
  /// Inserts with id next_arrow_id(); returns that id.
  ArrowId add_arrow(std::string name, VertexId source, VertexId target, Degree degree);
  void remove_arrows(std::span<const ArrowId> ids);

  std::vector<ArrowId> arrows_into(VertexId v) const;
  std::vector<ArrowId> arrows_out_of(VertexId v) const;
  std::vector<ArrowId> arrows_between(VertexId source, VertexId target) const;

  friend bool operator==(const Quiver&, const Quiver&) = default;

 private:
  Grading grading_;
  std::vector<Vertex> vertices_;
  std::vector<Arrow> arrows_;
};

/// Ordered arrow word a1 a2 ... an in traversal order (a1 is traversed first).
struct Path {
  std::vector<ArrowId> arrows;

  std::size_t length() const { return arrows.size(); }
  bool empty() const { return arrows.empty(); }
  friend bool operator==(const Path&, const Path&) = default;
  friend auto operator<=>(const Path&, const Path&) = default;
};

/// Throws Error(ArrowAbsent) / Error(EndpointMismatch) when the path does not
/// compose in `quiver`.
void check_path(const Quiver& quiver, const Path& path);
VertexId path_source(const Quiver& quiver, const Path& path);
VertexId path_target(const Quiver& quiver, const Path& path);
bool is_closed(const Quiver& quiver, const Path& path);

/// Sum of arrow degrees; the empty path has degree zero.
Degree path_degree(const Quiver& quiver, const Path& path);
Degree path_degree(const Quiver& quiver, std::span<const ArrowId> arrows);

/// Arrows with source == target.
std::vector<ArrowId> loops(const Quiver& quiver);
/// All unordered pairs (a: u -> v, b: v -> u) with u < v, listed with `a`
/// running from the smaller vertex.
std::vector<std::pair<ArrowId, ArrowId>> two_cycles(const Quiver& quiver);

/// True if `v` carries a loop or lies on a two-cycle.
bool blocks_mutation(const Quiver& quiver, VertexId v);

}  // namespace qpmut
