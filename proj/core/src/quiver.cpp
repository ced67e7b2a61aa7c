#include "qpmut/quiver.hpp"

#include <algorithm>
#include <set>

#include "qpmut/error.hpp"

namespace qpmut {

namespace {

template <class Range, class Id>
auto find_by_id(Range& range, Id id) {
  auto it = std::lower_bound(range.begin(), range.end(), id,
                             [](const auto& item, Id key) { return item.id < key; });
  return (it != range.end() && it->id == id) ? it : range.end();
}

}  // namespace

Quiver::Quiver(Grading grading) : grading_(std::move(grading)) {
  if (grading_.potential_degree.rank() != grading_.rank) {
    if (grading_.potential_degree.rank() == 0) {
      grading_.potential_degree = Degree::zero(grading_.rank);
    } else {
      throw Error(ErrorKind::InvalidArgument, "potential degree rank differs from grading rank");
    }
  }
}

bool Quiver::has_vertex(VertexId v) const { return find_by_id(vertices_, v) != vertices_.end(); }

bool Quiver::has_arrow(ArrowId a) const { return find_by_id(arrows_, a) != arrows_.end(); }

const Vertex& Quiver::vertex(VertexId v) const {
  auto it = find_by_id(vertices_, v);
  if (it == vertices_.end()) throw Error(ErrorKind::VertexAbsent, "vertex absent: " + std::to_string(v));
  return *it;
}

const Arrow& Quiver::arrow(ArrowId a) const {
  const Arrow* p = find_arrow(a);
  if (!p) throw Error(ErrorKind::ArrowAbsent, "arrow absent: " + std::to_string(a));
  return *p;
}

const Arrow* Quiver::find_arrow(ArrowId a) const {
  auto it = find_by_id(arrows_, a);
  return it == arrows_.end() ? nullptr : &*it;
}

ArrowId Quiver::next_arrow_id() const { return arrows_.empty() ? 0 : arrows_.back().id + 1; }

void Quiver::add_vertex(VertexId id, std::string label) {
  if (id < 0) throw Error(ErrorKind::InvalidArgument, "negative vertex id");
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), id,
                             [](const Vertex& v, VertexId key) { return v.id < key; });
  if (it != vertices_.end() && it->id == id) {
    throw Error(ErrorKind::InvalidArgument, "duplicate vertex id " + std::to_string(id));
  }
  vertices_.insert(it, Vertex{id, std::move(label)});
}

void Quiver::add_arrow(Arrow arrow) {
  if (!has_vertex(arrow.source) || !has_vertex(arrow.target)) {
    throw Error(ErrorKind::VertexAbsent, "arrow '" + arrow.name + "' has a dangling endpoint");
  }
  if (arrow.degree.rank() != grading_.rank) {
    throw Error(ErrorKind::InvalidArgument, "arrow '" + arrow.name + "' degree rank differs from grading rank");
  }
  auto it = std::lower_bound(arrows_.begin(), arrows_.end(), arrow.id,
                             [](const Arrow& a, ArrowId key) { return a.id < key; });
  if (it != arrows_.end() && it->id == arrow.id) {
    throw Error(ErrorKind::InvalidArgument, "duplicate arrow id " + std::to_string(arrow.id));
  }
  arrows_.insert(it, std::move(arrow));
}

ArrowId Quiver::add_arrow(std::string name, VertexId source, VertexId target, Degree degree) {
  const ArrowId id = next_arrow_id();
  add_arrow(Arrow{id, std::move(name), source, target, std::move(degree)});
  return id;
}

void Quiver::remove_arrows(std::span<const ArrowId> ids) {
  const std::set<ArrowId> doomed(ids.begin(), ids.end());
  std::erase_if(arrows_, [&](const Arrow& a) { return doomed.contains(a.id); });
}

std::vector<ArrowId> Quiver::arrows_into(VertexId v) const {
  std::vector<ArrowId> out;
  for (const auto& a : arrows_)
    if (a.target == v) out.push_back(a.id);
  return out;
}

std::vector<ArrowId> Quiver::arrows_out_of(VertexId v) const {
  std::vector<ArrowId> out;
  for (const auto& a : arrows_)
    if (a.source == v) out.push_back(a.id);
  return out;
}

std::vector<ArrowId> Quiver::arrows_between(VertexId source, VertexId target) const {
  std::vector<ArrowId> out;
  for (const auto& a : arrows_)
    if (a.source == source && a.target == target) out.push_back(a.id);
  return out;
}

void check_path(const Quiver& quiver, const Path& path) {
  for (std::size_t i = 0; i < path.arrows.size(); ++i) {
    const Arrow& a = quiver.arrow(path.arrows[i]);
    if (i + 1 < path.arrows.size() && a.target != quiver.arrow(path.arrows[i + 1]).source) {
      throw Error(ErrorKind::EndpointMismatch, "path is not composable at position " + std::to_string(i));
    }
  }
}

VertexId path_source(const Quiver& quiver, const Path& path) {
  if (path.empty()) throw Error(ErrorKind::InvalidArgument, "empty path has no source");
  return quiver.arrow(path.arrows.front()).source;
}

VertexId path_target(const Quiver& quiver, const Path& path) {
  if (path.empty()) throw Error(ErrorKind::InvalidArgument, "empty path has no target");
  return quiver.arrow(path.arrows.back()).target;
}

bool is_closed(const Quiver& quiver, const Path& path) {
  return !path.empty() && path_source(quiver, path) == path_target(quiver, path);
}

Degree path_degree(const Quiver& quiver, std::span<const ArrowId> arrows) {
  Degree d = Degree::zero(quiver.grading().rank);
  for (ArrowId a : arrows) d += quiver.arrow(a).degree;
  return d;
}

Degree path_degree(const Quiver& quiver, const Path& path) { return path_degree(quiver, path.arrows); }

std::vector<ArrowId> loops(const Quiver& quiver) {
  std::vector<ArrowId> out;
  for (const auto& a : quiver.arrows())
    if (a.is_loop()) out.push_back(a.id);
  return out;
}

std::vector<std::pair<ArrowId, ArrowId>> two_cycles(const Quiver& quiver) {
  std::vector<std::pair<ArrowId, ArrowId>> out;
  for (const auto& a : quiver.arrows()) {
    if (a.source >= a.target) continue;
    for (const auto& b : quiver.arrows()) {
      if (b.source == a.target && b.target == a.source) out.emplace_back(a.id, b.id);
    }
  }
  return out;
}

bool blocks_mutation(const Quiver& quiver, VertexId v) {
  std::set<VertexId> in, out;
  for (const auto& a : quiver.arrows()) {
    if (a.source == v && a.target == v) return true;
    if (a.target == v) in.insert(a.source);
    if (a.source == v) out.insert(a.target);
  }
  for (VertexId u : in)
    if (out.contains(u)) return true;
  return false;
}

}  // namespace qpmut
