#include "qpmut/jacobian.hpp"

#include <algorithm>

#include "parallel.hpp"
#include "qpmut/error.hpp"
#include "qpmut/linalg.hpp"

namespace qpmut {

std::vector<std::int64_t> DimensionTable::totals() const {
  std::vector<std::int64_t> out(static_cast<std::size_t>(std::max<std::int64_t>(max_degree + 1, 0)), 0);
  for (const auto& [d, dim] : dims) {
    const auto f = d.dot(functional);
    if (f >= 0 && f <= max_degree) out[static_cast<std::size_t>(f)] += dim;
  }
  return out;
}

std::int64_t DimensionTable::at(const Degree& d) const {
  auto it = dims.find(d);
  return it == dims.end() ? 0 : it->second;
}

namespace {

// A path together with its start vertex, so that idempotents are representable.
struct BasisPath {
  VertexId start;
  std::vector<ArrowId> arrows;
  friend auto operator<=>(const BasisPath&, const BasisPath&) = default;
};

struct Enumerated {
  BasisPath path;
  VertexId end;
  Degree degree;
  std::int64_t weight;  // functional value
};

struct Setup {
  std::vector<std::int64_t> functional;
  Degree potential_degree;
  bool has_potential = false;
  std::int64_t exact_up_to = 0;
};

Setup prepare(const QPState& qp, std::int64_t max_degree, const DimsOptions& options) {
  const Quiver& q = qp.quiver;
  Setup s;
  s.functional = options.functional.value_or(std::vector<std::int64_t>(q.grading().rank, 1));
  if (s.functional.size() != q.grading().rank) {
    throw Error(ErrorKind::InvalidArgument, "functional length differs from the grading rank");
  }
  std::int64_t min_weight = INT64_MAX, max_weight = 0;
  for (const auto& a : q.arrows()) {
    const auto f = a.degree.dot(s.functional);
    if (f <= 0) {
      throw Error(ErrorKind::NonPositiveGrading,
                  "degree-wise finiteness not guaranteed: arrow '" + a.name + "' has degree " + a.degree.str());
    }
    min_weight = std::min(min_weight, f);
    max_weight = std::max(max_weight, f);
  }
  if (!qp.potential.empty()) {
    auto hom = is_homogeneous(q, qp.potential);
    if (!hom) throw Error(ErrorKind::NotHomogeneous, "graded dimensions need a homogeneous potential");
    s.potential_degree = *hom;
    s.has_potential = true;
  }
  s.exact_up_to = max_degree;
  if (s.has_potential && qp.faithful_horizon) {
    // Missing words are longer than the horizon; if such words cannot reach
    // the potential's degree nothing is missing at all.
    const auto r = s.potential_degree.dot(s.functional);
    const auto shortest_missing = static_cast<std::int64_t>(*qp.faithful_horizon + 1) * min_weight;
    if (shortest_missing <= r) s.exact_up_to = std::min<std::int64_t>(max_degree, r - max_weight - 1);
  }
  return s;
}

std::vector<Enumerated> enumerate_paths(const Quiver& q, const std::vector<std::int64_t>& functional,
                                        std::int64_t max_degree) {
  std::vector<Enumerated> out;
  if (max_degree < 0) return out;
  for (const auto& v : q.vertices()) {
    out.push_back({BasisPath{v.id, {}}, v.id, Degree::zero(q.grading().rank), 0});
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    for (const auto& a : q.arrows()) {
      if (a.source != out[k].end) continue;
      const auto w = out[k].weight + a.degree.dot(functional);
      if (w > max_degree) continue;
      Enumerated next = out[k];
      next.path.arrows.push_back(a.id);
      next.end = a.target;
      next.degree += a.degree;
      next.weight = w;
      out.push_back(std::move(next));
    }
  }
  return out;
}

struct Relation {
  ArrowId arrow;
  PathSum rho;  // d_a W: target(a) -> source(a)
  Degree degree;
  std::int64_t weight;
};

std::vector<Relation> relations(const QPState& qp, const Setup& s) {
  std::vector<Relation> out;
  if (!s.has_potential) return out;
  for (const auto& a : qp.quiver.arrows()) {
    PathSum rho = cyclic_derivative(qp.quiver, qp.potential, a.id);
    if (rho.empty()) continue;
    Degree d = s.potential_degree - a.degree;
    const auto w = d.dot(s.functional);
    out.push_back({a.id, std::move(rho), std::move(d), w});
  }
  return out;
}

template <class Key>
struct DegreeBlock {
  std::map<Key, std::size_t> basis;
  std::vector<SparseRow> rows;
};

template <class Key>
DimensionTable finish(std::map<Degree, DegreeBlock<Key>>& blocks, const Setup& s, std::int64_t max_degree,
                      unsigned threads) {
  std::vector<typename std::map<Degree, DegreeBlock<Key>>::iterator> order;
  for (auto it = blocks.begin(); it != blocks.end(); ++it) order.push_back(it);
  std::vector<std::int64_t> dims(order.size(), 0);
  detail::parallel_for(order.size(), threads, [&](std::size_t i) {
    auto& block = order[i]->second;
    const auto r = rank(std::move(block.rows));
    dims[i] = static_cast<std::int64_t>(block.basis.size() - r);
  });
  DimensionTable table;
  table.functional = s.functional;
  table.max_degree = max_degree;
  table.exact_up_to = s.exact_up_to;
  for (std::size_t i = 0; i < order.size(); ++i) table.dims.emplace(order[i]->first, dims[i]);
  return table;
}

}  // namespace

DimensionTable graded_dims(const QPState& qp, std::int64_t max_degree, const DimsOptions& options) {
  const Setup s = prepare(qp, max_degree, options);
  const Quiver& q = qp.quiver;
  const auto paths = enumerate_paths(q, s.functional, max_degree);

  std::map<Degree, DegreeBlock<BasisPath>> blocks;
  for (const auto& p : paths) {
    auto& basis = blocks[p.degree].basis;
    basis.emplace(p.path, basis.size());
  }

  std::map<VertexId, std::vector<const Enumerated*>> by_end, by_start;
  for (const auto& p : paths) {
    by_end[p.end].push_back(&p);
    by_start[p.path.start].push_back(&p);
  }

  for (const auto& rel : relations(qp, s)) {
    const Arrow& a = q.arrow(rel.arrow);
    for (const Enumerated* left : by_end[a.target]) {
      if (left->weight + rel.weight > max_degree) continue;
      for (const Enumerated* right : by_start[a.source]) {
        if (left->weight + rel.weight + right->weight > max_degree) continue;
        const Degree d = left->degree + rel.degree + right->degree;
        auto& block = blocks[d];
        SparseRow row;
        for (const auto& [t, c] : rel.rho.terms()) {
          BasisPath full{left->path.start, left->path.arrows};
          full.arrows.insert(full.arrows.end(), t.arrows.begin(), t.arrows.end());
          full.arrows.insert(full.arrows.end(), right->path.arrows.begin(), right->path.arrows.end());
          const std::size_t idx = block.basis.at(full);
          auto [it, inserted] = row.try_emplace(idx, 0);
          it->second += c;
          if (it->second == 0) row.erase(it);
        }
        if (!row.empty()) block.rows.push_back(std::move(row));
      }
    }
  }
  return finish(blocks, s, max_degree, options.threads);
}

DimensionTable hh0_dims(const QPState& qp, std::int64_t max_degree, const DimsOptions& options) {
  const Setup s = prepare(qp, max_degree, options);
  const Quiver& q = qp.quiver;
  const auto paths = enumerate_paths(q, s.functional, max_degree);

  // Necklace key: idempotent (v, {}) or the least rotation of a closed path.
  auto necklace = [](VertexId start, std::vector<ArrowId> arrows) {
    if (arrows.empty()) return BasisPath{start, {}};
    return BasisPath{-1, CyclicWord::from_closed(std::move(arrows)).arrows()};
  };

  std::map<Degree, DegreeBlock<BasisPath>> blocks;
  for (const auto& p : paths) {
    if (p.end != p.path.start) continue;
    auto& basis = blocks[p.degree].basis;
    basis.emplace(necklace(p.path.start, p.path.arrows), basis.size());
  }

  std::map<std::pair<VertexId, VertexId>, std::vector<const Enumerated*>> by_ends;
  for (const auto& p : paths) by_ends[{p.path.start, p.end}].push_back(&p);

  for (const auto& rel : relations(qp, s)) {
    const Arrow& a = q.arrow(rel.arrow);
    for (const Enumerated* closing : by_ends[{a.source, a.target}]) {
      if (rel.weight + closing->weight > max_degree) continue;
      const Degree d = rel.degree + closing->degree;
      auto& block = blocks[d];
      SparseRow row;
      for (const auto& [t, c] : rel.rho.terms()) {
        std::vector<ArrowId> word = t.arrows;
        word.insert(word.end(), closing->path.arrows.begin(), closing->path.arrows.end());
        const std::size_t idx = block.basis.at(necklace(a.target, std::move(word)));
        auto [it, inserted] = row.try_emplace(idx, 0);
        it->second += c;
        if (it->second == 0) row.erase(it);
      }
      if (!row.empty()) block.rows.push_back(std::move(row));
    }
  }
  return finish(blocks, s, max_degree, options.threads);
}

QPState with_length_grading(const QPState& qp) {
  std::optional<std::size_t> common;
  bool uniform = true;
  for (const auto& [w, c] : qp.potential.terms()) {
    if (!common) common = w.length();
    uniform = uniform && *common == w.length();
  }
  const auto r = static_cast<std::int64_t>(uniform && common ? *common : 0);
  Quiver q(Grading{1, Degree{r}});
  for (const auto& v : qp.quiver.vertices()) q.add_vertex(v.id, v.label);
  for (const auto& a : qp.quiver.arrows()) q.add_arrow(Arrow{a.id, a.name, a.source, a.target, Degree{1}});
  return QPState{std::move(q), qp.potential, qp.faithful_horizon};
}

}  // namespace qpmut
