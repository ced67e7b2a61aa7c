#include "qpmut/mutation.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "qpmut/error.hpp"

namespace qpmut {

namespace {

std::string starred(const std::string& name) {
  if (!name.empty() && name.back() == '*') return name.substr(0, name.size() - 1);
  return name + "*";
}

CyclicWord two_word(ArrowId a, ArrowId b) { return CyclicWord::from_closed({a, b}); }

/// Path obtained by deleting the first occurrence of `a` and reading on
/// cyclically; `word` equals that occurrence followed by the path.
std::optional<Path> after_first(const CyclicWord& word, ArrowId a) {
  const auto& s = word.arrows();
  auto it = std::find(s.begin(), s.end(), a);
  if (it == s.end()) return std::nullopt;
  const std::size_t k = static_cast<std::size_t>(it - s.begin());
  Path p;
  p.arrows.reserve(s.size() - 1);
  for (std::size_t j = 1; j < s.size(); ++j) p.arrows.push_back(s[(k + j) % s.size()]);
  return p;
}

class Reducer {
 public:
  Reducer(const QPState& qp, const ReduceOptions& options, MutationReport& report)
      : quiver_(qp.quiver), w_(qp.potential), options_(options), report_(report) {
    w_.set_exact(true);
  }

  void run() {
    linear_phase();
    higher_phase();
  }

  /// True if some word was dropped by the length cap or by truncation.
  bool discarded() const { return !w_.exact(); }

  Potential take_potential() { return std::move(w_); }
  const std::vector<ArrowId>& deleted() const { return deleted_; }
  std::optional<std::size_t> truncation_bound() const { return truncation_bound_; }

 private:
  struct Trivial {
    ArrowId a;
    ArrowId b;  // equal to `a` for a single loop square
    Rational coeff;
  };

  void apply(ArrowId arrow, const PathSum& replacement) {
    Substitution sigma{{arrow, replacement}};
    w_ = substitute(quiver_, w_, sigma, w_.length_cap());
    ++report_.substitution_rounds;
    if (options_.log_substitutions) report_.substitution_log.push_back({arrow, replacement});
  }

  PathSum arrow_plus(ArrowId a, const PathSum& delta) {
    PathSum s = PathSum::single(Path{{a}});
    s.add(delta);
    return s;
  }

  Rational coef2(ArrowId a, ArrowId b) const { return w_.coefficient(two_word(a, b)); }

  void linear_phase() {
    for (const auto& v1 : quiver_.vertices()) {
      const VertexId u = v1.id;
      if (auto ls = quiver_.arrows_between(u, u); !ls.empty()) loop_block(u, ls);
      for (const auto& v2 : quiver_.vertices()) {
        const VertexId v = v2.id;
        if (v <= u) continue;
        auto rows = quiver_.arrows_between(u, v);
        auto cols = quiver_.arrows_between(v, u);
        if (!rows.empty() && !cols.empty()) pair_block(u, v, std::move(rows), std::move(cols));
      }
    }
  }

  void pair_block(VertexId u, VertexId v, std::vector<ArrowId> rows, std::vector<ArrowId> cols) {
    TrivialBlock block{u, v, rows, cols, {}, 0, {}};
    for (ArrowId a : rows) {
      auto& line = block.matrix.emplace_back();
      for (ArrowId b : cols) line.push_back(coef2(a, b));
    }
    std::vector<ArrowId> active_rows = rows, active_cols = cols;
    while (true) {
      std::optional<std::pair<ArrowId, ArrowId>> pivot;
      for (ArrowId a : active_rows) {
        for (ArrowId b : active_cols) {
          if (coef2(a, b) != 0) {
            pivot = {a, b};
            break;
          }
        }
        if (pivot) break;
      }
      if (!pivot) break;
      const auto [a, b] = *pivot;
      const Rational c = coef2(a, b);

      // Clear column b: a -> a - sum_x (C[x][b] / c) x.
      PathSum delta;
      for (ArrowId x : active_rows)
        if (x != a) delta.add(Path{{x}}, -coef2(x, b) / c);
      if (!delta.empty()) apply(a, arrow_plus(a, delta));

      // Clear row a: b -> b - sum_y (C[a][y] / c) y.
      delta = {};
      for (ArrowId y : active_cols)
        if (y != b) delta.add(Path{{y}}, -coef2(a, y) / c);
      if (!delta.empty()) apply(b, arrow_plus(b, delta));

      if (c != 1) apply(b, PathSum::single(Path{{b}}, Rational(1) / c));

      trivial_.push_back({a, b, Rational(1)});
      std::erase(active_rows, a);
      std::erase(active_cols, b);
      ++block.rank;
      block.deleted.push_back(a);
      block.deleted.push_back(b);
    }
    report_.trivial_blocks.push_back(std::move(block));
  }

  // Symmetric Gram entry of the quadratic form on loops at one vertex.
  Rational gram(ArrowId s, ArrowId t) const {
    return s == t ? coef2(s, s) : coef2(s, t) / 2;
  }

  void loop_block(VertexId u, std::vector<ArrowId> ls) {
    TrivialBlock block{u, u, ls, ls, {}, 0, {}};
    for (ArrowId s : ls) {
      auto& line = block.matrix.emplace_back();
      for (ArrowId t : ls) line.push_back(gram(s, t));
    }
    std::vector<ArrowId> active = ls;
    while (true) {
      auto diag = std::find_if(active.begin(), active.end(), [&](ArrowId t) { return gram(t, t) != 0; });
      if (diag != active.end()) {
        const ArrowId t = *diag;
        const Rational c = gram(t, t);
        PathSum delta;
        for (ArrowId x : active)
          if (x != t) delta.add(Path{{x}}, -gram(t, x) / c);
        if (!delta.empty()) apply(t, arrow_plus(t, delta));
        trivial_.push_back({t, t, c});
        std::erase(active, t);
        ++block.rank;
        block.deleted.push_back(t);
        continue;
      }
      std::optional<std::pair<ArrowId, ArrowId>> pivot;
      for (ArrowId s : active) {
        for (ArrowId t : active) {
          if (s != t && gram(s, t) != 0) {
            pivot = {s, t};
            break;
          }
        }
        if (pivot) break;
      }
      if (!pivot) break;
      const auto [s, t] = *pivot;
      const Rational bst = gram(s, t);
      PathSum delta;
      for (ArrowId x : active)
        if (x != s && x != t) delta.add(Path{{x}}, -gram(s, x) / bst);
      if (!delta.empty()) apply(t, arrow_plus(t, delta));
      delta = {};
      for (ArrowId x : active)
        if (x != s && x != t) delta.add(Path{{x}}, -gram(t, x) / bst);
      if (!delta.empty()) apply(s, arrow_plus(s, delta));
      const Rational c = coef2(s, t);
      if (c != 1) apply(t, PathSum::single(Path{{t}}, Rational(1) / c));
      trivial_.push_back({s, t, Rational(1)});
      std::erase(active, s);
      std::erase(active, t);
      block.rank += 2;
      block.deleted.push_back(s);
      block.deleted.push_back(t);
    }
    report_.trivial_blocks.push_back(std::move(block));
  }

  // Sum of c_w * p_w over words w != keep containing `a`, where w = (a, p_w)
  // at the first occurrence of `a`.
  PathSum coupling(ArrowId a, const CyclicWord& keep) const {
    PathSum out;
    for (const auto& [word, c] : w_.terms()) {
      if (word == keep) continue;
      if (auto p = after_first(word, a)) out.add(*p, c);
    }
    return out;
  }

  void higher_phase() {
    for (const Trivial& t : trivial_) {
      const CyclicWord keep = two_word(t.a, t.b);
      std::size_t rounds = 0;
      bool clean = false;
      while (rounds < options_.round_cap) {
        bool changed = false;
        if (t.a == t.b) {
          PathSum p = coupling(t.a, keep);
          if (!p.empty()) {
            apply(t.a, arrow_plus(t.a, p.scaled(Rational(-1) / (2 * t.coeff))));
            changed = true;
            ++rounds;
          }
        } else {
          PathSum p = coupling(t.a, keep);
          if (!p.empty()) {
            apply(t.b, arrow_plus(t.b, p.scaled(-1)));
            changed = true;
            ++rounds;
          }
          PathSum q = coupling(t.b, keep);
          if (!q.empty()) {
            apply(t.a, arrow_plus(t.a, q.scaled(-1)));
            changed = true;
            ++rounds;
          }
        }
        if (!changed) {
          clean = true;
          break;
        }
      }
      if (!clean) clean = coupling(t.a, keep).empty() && coupling(t.b, keep).empty();
      if (!clean) drop_couplings(t, keep);
      w_.erase(keep);
      deleted_.push_back(t.a);
      if (t.b != t.a) deleted_.push_back(t.b);
    }
  }

  void drop_couplings(const Trivial& t, const CyclicWord& keep) {
    report_.truncated_reduction = true;
    std::vector<CyclicWord> doomed;
    for (const auto& [word, c] : w_.terms()) {
      if (word != keep && (word.contains(t.a) || word.contains(t.b))) doomed.push_back(word);
    }
    for (const auto& word : doomed) {
      const std::size_t below = word.length() - 1;
      truncation_bound_ = truncation_bound_ ? std::min(*truncation_bound_, below) : below;
      w_.erase(word);
    }
    w_.mark_inexact();
  }

  const Quiver& quiver_;
  Potential w_;
  const ReduceOptions& options_;
  MutationReport& report_;
  std::vector<Trivial> trivial_;
  std::vector<ArrowId> deleted_;
  std::optional<std::size_t> truncation_bound_;
};

std::optional<std::size_t> min_opt(std::optional<std::size_t> a, std::optional<std::size_t> b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

}  // namespace

std::size_t MutationReport::deleted_arrow_count() const {
  std::size_t n = 0;
  for (const auto& b : trivial_blocks) n += b.deleted.size();
  return n;
}

std::pair<QPState, MutationReport> premutate(const QPState& qp, VertexId i) {
  const Quiver& q = qp.quiver;
  if (!q.has_vertex(i)) throw Error(ErrorKind::VertexAbsent, "vertex absent: " + std::to_string(i));
  if (blocks_mutation(q, i)) {
    throw Error(ErrorKind::MutationUndefined,
                "mutation undefined at vertex " + std::to_string(i) + ": incident to a loop or two-cycle");
  }
  const Degree& r = q.grading().potential_degree;
  MutationReport report;
  report.vertex = i;

  Quiver out(q.grading());
  for (const auto& v : q.vertices()) out.add_vertex(v.id, v.label);
  for (const auto& a : q.arrows()) {
    if (a.target == i) {
      Arrow rev{a.id, starred(a.name), i, a.source, r - a.degree};
      report.arrows_reversed.push_back({a.id, a.name, rev.name, rev.source, rev.target, a.degree, rev.degree});
      out.add_arrow(std::move(rev));
    } else if (a.source == i) {
      Arrow rev{a.id, starred(a.name), a.target, i, -a.degree};
      report.arrows_reversed.push_back({a.id, a.name, rev.name, rev.source, rev.target, a.degree, rev.degree});
      out.add_arrow(std::move(rev));
    } else {
      out.add_arrow(a);
    }
  }

  const auto ins = q.arrows_into(i);
  const auto outs = q.arrows_out_of(i);
  std::map<std::pair<ArrowId, ArrowId>, ArrowId> composite;
  ArrowId next = q.next_arrow_id();
  for (ArrowId a : ins) {
    for (ArrowId b : outs) {
      const Arrow& aa = q.arrow(a);
      const Arrow& bb = q.arrow(b);
      Arrow c{next++, "[" + aa.name + " " + bb.name + "]", aa.source, bb.target, aa.degree + bb.degree};
      composite[{a, b}] = c.id;
      report.arrows_added.push_back({c.id, c.name, c.source, c.target, c.degree, a, b});
      out.add_arrow(std::move(c));
    }
  }

  Potential w(qp.potential.length_cap());
  w.set_exact(qp.potential.exact());
  for (const auto& [word, coeff] : qp.potential.terms()) {
    const auto& s = word.arrows();
    const std::size_t n = s.size();
    std::size_t start = 0;
    while (start < n && q.arrow(s[start]).source == i) ++start;
    std::vector<ArrowId> seq;
    seq.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      const ArrowId x = s[(start + j) % n];
      if (q.arrow(x).target == i) {
        const ArrowId y = s[(start + j + 1) % n];
        seq.push_back(composite.at({x, y}));
        ++j;
      } else {
        seq.push_back(x);
      }
    }
    w.add(CyclicWord::from_closed(std::move(seq)), coeff);
  }
  for (const auto& [ab, c] : composite) w.add(CyclicWord::from_closed({c, ab.second, ab.first}), Rational(1));

  QPState result{std::move(out), std::move(w), std::nullopt};
  if (qp.faithful_horizon) result.faithful_horizon = *qp.faithful_horizon / 2;
  report.exact = result.potential.exact();
  return {std::move(result), std::move(report)};
}

std::pair<QPState, MutationReport> reduce(const QPState& qp, const ReduceOptions& options) {
  MutationReport report;
  Reducer reducer(qp, options, report);
  reducer.run();

  const bool discarded = reducer.discarded();
  QPState result;
  result.quiver = qp.quiver;
  result.quiver.remove_arrows(reducer.deleted());
  result.potential = reducer.take_potential();
  result.potential.set_exact(qp.potential.exact() && !discarded);
  result.faithful_horizon = qp.faithful_horizon;
  if (discarded) {
    result.faithful_horizon = min_opt(result.faithful_horizon, result.potential.length_cap());
    result.faithful_horizon = min_opt(result.faithful_horizon, reducer.truncation_bound());
  }
  report.exact = result.potential.exact();
  return {std::move(result), std::move(report)};
}

std::pair<QPState, MutationReport> mutate(const QPState& qp, VertexId i, const ReduceOptions& options) {
  auto [pre, report] = premutate(qp, i);
  auto [red, rr] = reduce(pre, options);
  report.trivial_blocks = std::move(rr.trivial_blocks);
  report.substitution_rounds = rr.substitution_rounds;
  report.substitution_log = std::move(rr.substitution_log);
  report.truncated_reduction = rr.truncated_reduction;
  report.exact = rr.exact;
  return {std::move(red), std::move(report)};
}

QPState replay(const QPState& root, const std::vector<VertexId>& sequence, const ReduceOptions& options) {
  QPState state = root;
  for (VertexId v : sequence) state = mutate(state, v, options).first;
  return state;
}

namespace {

bool augment(std::size_t a, const std::vector<std::vector<std::size_t>>& adj, std::vector<int>& match_b,
             std::vector<char>& seen) {
  for (std::size_t b : adj[a]) {
    if (seen[b]) continue;
    seen[b] = 1;
    if (match_b[b] < 0 || augment(static_cast<std::size_t>(match_b[b]), adj, match_b, seen)) {
      match_b[b] = static_cast<int>(a);
      return true;
    }
  }
  return false;
}

}  // namespace

std::optional<ObstructionCertificate> degree_obstruction(const QPState& qp) {
  const Quiver& q = qp.quiver;
  const Degree& r = q.grading().potential_degree;
  if (!qp.potential.empty()) {
    auto hom = is_homogeneous(q, qp.potential);
    if (!hom) throw Error(ErrorKind::NotHomogeneous, "degree obstruction needs a homogeneous potential");
    if (*hom != r) {
      throw Error(ErrorKind::NotHomogeneous,
                  "potential has degree " + hom->str() + " but the grading declares " + r.str());
    }
  }
  for (const auto& vu : q.vertices()) {
    for (const auto& vv : q.vertices()) {
      if (vv.id <= vu.id) continue;
      const auto as = q.arrows_between(vu.id, vv.id);
      const auto bs = q.arrows_between(vv.id, vu.id);
      if (as.empty() || bs.empty()) continue;
      std::vector<std::vector<std::size_t>> adj(as.size());
      for (std::size_t x = 0; x < as.size(); ++x)
        for (std::size_t y = 0; y < bs.size(); ++y)
          if (q.arrow(as[x]).degree + q.arrow(bs[y]).degree == r) adj[x].push_back(y);
      std::vector<int> match_b(bs.size(), -1);
      std::vector<char> matched_a(as.size(), 0);
      for (std::size_t x = 0; x < as.size(); ++x) {
        std::vector<char> seen(bs.size(), 0);
        augment(x, adj, match_b, seen);
      }
      ObstructionCertificate cert{vu.id, vv.id, 0, 0, {}, {}, {}, r, {}};
      for (std::size_t y = 0; y < bs.size(); ++y) {
        if (match_b[y] >= 0) {
          matched_a[static_cast<std::size_t>(match_b[y])] = 1;
          cert.matching.emplace_back(as[static_cast<std::size_t>(match_b[y])], bs[y]);
        }
      }
      std::sort(cert.matching.begin(), cert.matching.end());
      auto free_a = std::find(matched_a.begin(), matched_a.end(), 0);
      auto free_b = std::find(match_b.begin(), match_b.end(), -1);
      if (free_a == matched_a.end() || free_b == match_b.end()) continue;
      cert.a = as[static_cast<std::size_t>(free_a - matched_a.begin())];
      cert.b = bs[static_cast<std::size_t>(free_b - match_b.begin())];
      cert.degree_a = q.arrow(cert.a).degree;
      cert.degree_b = q.arrow(cert.b).degree;
      cert.degree_sum = cert.degree_a + cert.degree_b;
      return cert;
    }
  }
  return std::nullopt;
}

Degree gauge_shift(const Arrow& arrow, VertexId v, const Degree& shift) {
  Degree d = arrow.degree;
  if (arrow.source == v) d += shift;
  if (arrow.target == v) d -= shift;
  return d;
}

}  // namespace qpmut
