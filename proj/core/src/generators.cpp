#include "qpmut/generators.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>
#include <set>

#include "qpmut/error.hpp"
#include "qpmut/mutation.hpp"

namespace qpmut {

namespace {

int mod(int a, int n) { return ((a % n) + n) % n; }

}  // namespace

QPState mckay_cyclic(const McKaySpec& spec, LengthCap cap) {
  const int n = spec.n;
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "McKay modulus must be at least 2");
  std::array<int, 3> w{};
  for (int k = 0; k < 3; ++k) w[k] = mod(spec.weights[k], n);
  if (mod(w[0] + w[1] + w[2], n) != 0) {
    throw Error(ErrorKind::InvalidArgument, "McKay weights must sum to 0 mod n");
  }

  Quiver q(Grading{3, Degree{1, 1, 1}});
  for (int l = 0; l < n; ++l) q.add_vertex(l, std::to_string(l));
  // x{k}@{l} has id 3l + (k - 1)
  auto arrow_id = [](int k, int l) { return 3 * l + k; };
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < 3; ++k) {
      q.add_arrow(Arrow{arrow_id(k, l), "x" + std::to_string(k + 1) + "@" + std::to_string(l), l,
                        mod(l + w[k], n), Degree::unit(3, static_cast<std::size_t>(k))});
    }
  }

  Potential pot(cap);
  std::array<int, 3> perm{0, 1, 2};
  do {
    // Positive exactly on the cyclic rotations of (1,2,3).
    const bool positive = (perm[1] == mod(perm[0] + 1, 3));
    for (int l = 0; l < n; ++l) {
      const int l1 = mod(l + w[perm[0]], n);
      const int l2 = mod(l1 + w[perm[1]], n);
      auto word = CyclicWord::from_closed({arrow_id(perm[0], l), arrow_id(perm[1], l1), arrow_id(perm[2], l2)});
      pot.set(word, Rational(positive ? 1 : -1));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return QPState{std::move(q), std::move(pot), std::nullopt};
}

bool gcd_condition(const McKaySpec& spec) {
  return std::all_of(spec.weights.begin(), spec.weights.end(),
                     [&](int a) { return std::gcd(mod(a, spec.n), spec.n) == 1; });
}

// Standard extended Dynkin tables; vertex 0 is the extending vertex.
ExtendedDynkin extended_dynkin(std::string_view label) {
  auto bad = [&] { return Error(ErrorKind::InvalidArgument, "unknown extended Dynkin type '" + std::string(label) + "'"); };
  if (label.size() < 3 || label[1] != '~') throw bad();
  int n = 0;
  auto [ptr, ec] = std::from_chars(label.data() + 2, label.data() + label.size(), n);
  if (ec != std::errc{} || ptr != label.data() + label.size()) throw bad();

  ExtendedDynkin d;
  d.n = n;
  d.label = std::string(label);
  switch (label[0]) {
    case 'A':
      // Cycle 0 -> 1 -> ... -> n -> 0; delta = (1, ..., 1).
      if (n < 1) throw bad();
      d.family = DynkinFamily::A;
      d.vertex_count = n + 1;
      for (int i = 0; i <= n; ++i) d.edges.emplace_back(i, (i + 1) % (n + 1));
      d.delta.assign(static_cast<std::size_t>(n + 1), 1);
      break;
    case 'D':
      // Leaves 0, 1 on vertex 2; chain 2 .. n-2; leaves n-1, n on vertex n-2.
      // delta = (1, 1, 2, ..., 2, 1, 1).
      if (n < 4) throw bad();
      d.family = DynkinFamily::D;
      d.vertex_count = n + 1;
      d.edges = {{0, 2}, {1, 2}};
      for (int i = 2; i < n - 2; ++i) d.edges.emplace_back(i, i + 1);
      d.edges.emplace_back(n - 2, n - 1);
      d.edges.emplace_back(n - 2, n);
      d.delta.assign(static_cast<std::size_t>(n + 1), 2);
      d.delta[0] = d.delta[1] = d.delta[static_cast<std::size_t>(n - 1)] = d.delta[static_cast<std::size_t>(n)] = 1;
      break;
    case 'E':
      d.family = DynkinFamily::E;
      if (n == 6) {
        // Three arms of length two around the centre 2.
        d.vertex_count = 7;
        d.edges = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {2, 5}, {5, 6}};
        d.delta = {1, 2, 3, 2, 1, 2, 1};
      } else if (n == 7) {
        // Chain 0..6 with vertex 7 attached to the centre 3.
        d.vertex_count = 8;
        d.edges = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {3, 7}};
        d.delta = {1, 2, 3, 4, 3, 2, 1, 2};
      } else if (n == 8) {
        // Chain 0..7 with vertex 8 attached to vertex 5.
        d.vertex_count = 9;
        d.edges = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {5, 8}};
        d.delta = {1, 2, 3, 4, 5, 6, 4, 2, 3};
      } else {
        throw bad();
      }
      break;
    default:
      throw bad();
  }
  return d;
}

namespace {

// Arrow ids on the double quiver: a{e} = 2e, a{e}* = 2e + 1, t{i} = 2E + i.
ArrowId edge_arrow(std::size_t e) { return static_cast<ArrowId>(2 * e); }
ArrowId edge_star(std::size_t e) { return static_cast<ArrowId>(2 * e + 1); }

// e_i [a, a*] e_i summed over edges: a a* for edges leaving i, -a* a for edges
// entering i. Paths in traversal order.
std::vector<std::pair<std::vector<ArrowId>, Rational>> commutator_at(const ExtendedDynkin& d, int i) {
  std::vector<std::pair<std::vector<ArrowId>, Rational>> out;
  for (std::size_t e = 0; e < d.edges.size(); ++e) {
    const auto [u, v] = d.edges[e];
    if (u == i) out.push_back({{edge_arrow(e), edge_star(e)}, Rational(1)});
    if (v == i) out.push_back({{edge_star(e), edge_arrow(e)}, Rational(-1)});
  }
  return out;
}

void check_lambda(const PreprojectiveSpec& spec, const ExtendedDynkin& d) {
  if (spec.lambda.size() != static_cast<std::size_t>(d.vertex_count)) {
    throw Error(ErrorKind::InvalidArgument, "type " + d.label + " needs " + std::to_string(d.vertex_count) +
                                                " lambda values, got " + std::to_string(spec.lambda.size()));
  }
}

}  // namespace

QPState deformed_preprojective(const PreprojectiveSpec& spec, LengthCap cap) {
  const ExtendedDynkin d = extended_dynkin(spec.type);
  check_lambda(spec, d);
  Quiver q(Grading{1, Degree{4}});
  for (int i = 0; i < d.vertex_count; ++i) q.add_vertex(i, std::to_string(i));
  for (std::size_t e = 0; e < d.edges.size(); ++e) {
    const auto [u, v] = d.edges[e];
    q.add_arrow(Arrow{edge_arrow(e), "a" + std::to_string(e), u, v, Degree{1}});
    q.add_arrow(Arrow{edge_star(e), "a" + std::to_string(e) + "*", v, u, Degree{1}});
  }
  const auto loop_base = static_cast<ArrowId>(2 * d.edges.size());
  for (int i = 0; i < d.vertex_count; ++i) {
    q.add_arrow(Arrow{loop_base + i, "t" + std::to_string(i), i, i, Degree{2}});
  }

  Potential w(cap);
  for (int i = 0; i < d.vertex_count; ++i) {
    const ArrowId t = loop_base + i;
    for (const auto& [path, c] : commutator_at(d, i)) {
      std::vector<ArrowId> word{t};
      word.insert(word.end(), path.begin(), path.end());
      w.add(CyclicWord::from_closed(std::move(word)), c);
    }
    w.add(CyclicWord::from_closed({t, t}), -spec.lambda[static_cast<std::size_t>(i)] / 2);
  }
  return QPState{std::move(q), std::move(w), std::nullopt};
}

QPState eliminate_loops(const QPState& qp) {
  for (ArrowId t : loops(qp.quiver)) {
    if (qp.potential.coefficient(CyclicWord::from_closed({t, t})) == 0) {
      throw Error(ErrorKind::LoopsNotRemovable,
                  "loops not removable: loop '" + qp.quiver.arrow(t).name + "' has no square term");
    }
  }
  auto [reduced, report] = reduce(qp);
  if (!loops(reduced.quiver).empty()) {
    throw Error(ErrorKind::LoopsNotRemovable, "loops not removable: reduction left a loop");
  }
  for (const auto& [word, c] : reduced.potential.terms()) {
    if (word.length() != 4) {
      throw Error(ErrorKind::LoopsNotRemovable, "loop elimination produced a word of length " +
                                                    std::to_string(word.length()));
    }
  }
  return reduced;
}

Potential preprojective_closed_form(const PreprojectiveSpec& spec, const Quiver& quiver) {
  const ExtendedDynkin d = extended_dynkin(spec.type);
  check_lambda(spec, d);
  Potential w(std::nullopt);
  for (int i = 0; i < d.vertex_count; ++i) {
    const Rational& lambda = spec.lambda[static_cast<std::size_t>(i)];
    if (lambda == 0) throw Error(ErrorKind::LoopsNotRemovable, "closed form needs every lambda nonzero");
    const auto terms = commutator_at(d, i);
    for (const auto& [p, cp] : terms) {
      for (const auto& [r, cr] : terms) {
        std::vector<ArrowId> word = p;
        word.insert(word.end(), r.begin(), r.end());
        w.add(CyclicWord::from_closed(std::move(word)), cp * cr / lambda);
      }
    }
  }
  for (const auto& [word, c] : w.terms()) canonical_cycle(quiver, Path{word.arrows()});
  return w;
}

std::vector<std::vector<int>> dynkin_positive_roots(const ExtendedDynkin& d) {
  const auto n = static_cast<std::size_t>(d.vertex_count);
  std::vector<std::vector<int>> cartan(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) cartan[i][i] = 2;
  for (const auto& [u, v] : d.edges) {
    cartan[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] -= 1;
    cartan[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] -= 1;
  }
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> order;
  for (std::size_t j = 1; j < n; ++j) {
    std::vector<int> alpha(n, 0);
    alpha[j] = 1;
    if (seen.insert(alpha).second) order.push_back(alpha);
  }
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (std::size_t j = 1; j < n; ++j) {
      std::vector<int> beta = order[k];
      int pairing = 0;
      for (std::size_t m = 1; m < n; ++m) pairing += cartan[j][m] * beta[m];
      if (pairing == 0) continue;
      beta[j] -= pairing;
      const bool positive = std::all_of(beta.begin(), beta.end(), [](int x) { return x >= 0; });
      if (positive && seen.insert(beta).second) order.push_back(beta);
    }
  }
  std::sort(order.begin(), order.end());
  return order;
}

LambdaReport validate_lambda(const PreprojectiveSpec& spec) {
  const ExtendedDynkin d = extended_dynkin(spec.type);
  check_lambda(spec, d);
  LambdaReport rep;
  rep.type = d.label;
  for (std::size_t i = 0; i < spec.lambda.size(); ++i) rep.delta_dot_lambda += d.delta[i] * spec.lambda[i];
  rep.delta_condition = rep.delta_dot_lambda == 0;
  rep.lambda_nonzero = std::all_of(spec.lambda.begin(), spec.lambda.end(), [](const Rational& x) { return x != 0; });
  const auto roots = dynkin_positive_roots(d);
  rep.dynkin_roots_checked = roots.size();
  for (const auto& alpha : roots) {
    Rational dot = 0;
    for (std::size_t i = 0; i < alpha.size(); ++i) dot += alpha[i] * spec.lambda[i];
    if (dot == 0) rep.failing_roots.push_back(alpha);
  }
  rep.dynkin_condition = rep.failing_roots.empty();
  return rep;
}

// ----------------------------------------------------------- spec strings

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = s.find(sep);
    out.push_back(s.substr(0, pos));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

// "k1=v,v,v,k2=v" -> {k1: [v, v, v], k2: [v]}
std::map<std::string, std::vector<std::string>> key_lists(std::string_view body, std::string_view full) {
  std::map<std::string, std::vector<std::string>> out;
  std::string current;
  for (auto token : split(body, ',')) {
    const auto eq = token.find('=');
    if (eq != std::string_view::npos) {
      current = std::string(token.substr(0, eq));
      if (out.contains(current)) throw Error(ErrorKind::Parse, "repeated key '" + current + "' in '" + std::string(full) + "'");
      out[current].emplace_back(token.substr(eq + 1));
    } else if (!current.empty()) {
      out[current].emplace_back(token);
    } else {
      throw Error(ErrorKind::Parse, "malformed generator spec '" + std::string(full) + "'");
    }
  }
  return out;
}

int parse_int(const std::string& s, std::string_view full) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::Parse, "expected an integer, got '" + s + "' in '" + std::string(full) + "'");
  }
  return v;
}

}  // namespace

bool looks_like_generator_spec(std::string_view text) {
  return text.starts_with("mckay:") || text.starts_with("preproj:");
}

GeneratorSpec parse_generator_spec(std::string_view text) {
  if (text.starts_with("mckay:")) {
    auto kv = key_lists(text.substr(6), text);
    if (!kv.contains("n") || !kv.contains("w") || kv["n"].size() != 1 || kv["w"].size() != 3 || kv.size() != 2) {
      throw Error(ErrorKind::Parse, "expected mckay:n=<int>,w=<a1>,<a2>,<a3>, got '" + std::string(text) + "'");
    }
    McKaySpec spec;
    spec.n = parse_int(kv["n"][0], text);
    for (std::size_t k = 0; k < 3; ++k) spec.weights[k] = parse_int(kv["w"][k], text);
    return spec;
  }
  if (text.starts_with("preproj:")) {
    auto kv = key_lists(text.substr(8), text);
    if (!kv.contains("type") || !kv.contains("lambda") || kv["type"].size() != 1 || kv.size() != 2) {
      throw Error(ErrorKind::Parse, "expected preproj:type=<X~n>,lambda=<q>,..., got '" + std::string(text) + "'");
    }
    PreprojectiveSpec spec;
    spec.type = kv["type"][0];
    for (const auto& s : kv["lambda"]) spec.lambda.push_back(parse_rational(s));
    return spec;
  }
  throw Error(ErrorKind::Parse, "unknown generator spec '" + std::string(text) + "'");
}

QPState generate(const GeneratorSpec& spec, LengthCap cap) {
  if (const auto* m = std::get_if<McKaySpec>(&spec)) return mckay_cyclic(*m, cap);
  return deformed_preprojective(std::get<PreprojectiveSpec>(spec), cap);
}

}  // namespace qpmut
