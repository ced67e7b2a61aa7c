#include "random_qp.hpp"

#include <numeric>

namespace testing_qp {

using namespace qpmut;

namespace {

Rational random_coeff(Rng& rng) {
  static const char* pool[] = {"1", "-1", "2", "-2", "1/2", "-1/3", "3", "5/4"};
  return parse_rational(pool[std::uniform_int_distribution<int>(0, 7)(rng)]);
}

}  // namespace

QPState random_cubic(Rng& rng, bool shift_gauge) {
  for (;;) {
    const int n = std::uniform_int_distribution<int>(3, 5)(rng);
    Quiver q(Grading{1, Degree{3}});
    for (int v = 0; v < n; ++v) q.add_vertex(v, std::to_string(v));
    int next = 0;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        const int mult = std::uniform_int_distribution<int>(0, 2)(rng);
        const bool forward = std::bernoulli_distribution(0.5)(rng);
        for (int k = 0; k < mult; ++k) {
          const int s = forward ? u : v, t = forward ? v : u;
          q.add_arrow(Arrow{next, "a" + std::to_string(next), s, t, Degree{1}});
          ++next;
        }
      }
    }
    if (q.arrows().size() > 9) continue;
    Potential w;
    for (const auto& a : q.arrows())
      for (const auto& b : q.arrows())
        for (const auto& c : q.arrows()) {
          if (a.target != b.source || b.target != c.source || c.target != a.source) continue;
          if (!std::bernoulli_distribution(0.7)(rng)) continue;
          const CyclicWord word = CyclicWord::from_closed({a.id, b.id, c.id});
          if (w.coefficient(word) == 0) w.add(word, random_coeff(rng));
        }
    if (w.empty()) continue;
    QPState qp{std::move(q), std::move(w), std::nullopt};
    if (shift_gauge) {
      for (int k = 0; k < 2; ++k) {
        const VertexId v = std::uniform_int_distribution<int>(0, n - 1)(rng);
        qp = gauge(qp, v, Degree{std::uniform_int_distribution<std::int64_t>(-2, 2)(rng)});
      }
    }
    return qp;
  }
}

QPState random_mckay(Rng& rng, McKaySpec* spec_out) {
  for (;;) {
    McKaySpec spec;
    spec.n = std::uniform_int_distribution<int>(3, 7)(rng);
    spec.weights[0] = std::uniform_int_distribution<int>(1, spec.n - 1)(rng);
    spec.weights[1] = std::uniform_int_distribution<int>(1, spec.n - 1)(rng);
    spec.weights[2] = ((-spec.weights[0] - spec.weights[1]) % spec.n + spec.n) % spec.n;
    if (spec.weights[2] == 0) continue;
    QPState qp = mckay_cyclic(spec);
    if (!loops(qp.quiver).empty() || !two_cycles(qp.quiver).empty()) continue;
    if (spec_out) *spec_out = spec;
    return qp;
  }
}

std::optional<VertexId> random_mutable_vertex(Rng& rng, const Quiver& q) {
  std::vector<VertexId> ok;
  for (const auto& v : q.vertices())
    if (!blocks_mutation(q, v.id)) ok.push_back(v.id);
  if (ok.empty()) return std::nullopt;
  return ok[std::uniform_int_distribution<std::size_t>(0, ok.size() - 1)(rng)];
}

QPState random_instance(Rng& rng, int max_steps) {
  QPState qp = std::bernoulli_distribution(0.5)(rng) ? random_cubic(rng, std::bernoulli_distribution(0.5)(rng))
                                                     : random_mckay(rng);
  const int steps = std::uniform_int_distribution<int>(0, max_steps)(rng);
  for (int k = 0; k < steps; ++k) {
    const auto v = random_mutable_vertex(rng, qp.quiver);
    if (!v) break;
    QPState next = mutate(qp, *v).first;
    if (next.quiver.arrows().size() > 24) break;
    qp = std::move(next);
  }
  return qp;
}

QPState gauge(const QPState& qp, VertexId v, const Degree& shift) {
  Quiver q(qp.quiver.grading());
  for (const auto& x : qp.quiver.vertices()) q.add_vertex(x.id, x.label);
  for (const auto& a : qp.quiver.arrows()) q.add_arrow(Arrow{a.id, a.name, a.source, a.target, gauge_shift(a, v, shift)});
  return QPState{std::move(q), qp.potential, qp.faithful_horizon};
}

QPState without_potential(const QPState& qp) {
  return QPState{qp.quiver, Potential(qp.potential.length_cap()), std::nullopt};
}

}  // namespace testing_qp
