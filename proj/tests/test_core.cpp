#include <gtest/gtest.h>

#include <random>

#include "qpmut/error.hpp"
#include "qpmut/generators.hpp"
#include "qpmut/linalg.hpp"
#include "support/errors.hpp"
#include "support/oracles.hpp"

using namespace qpmut;
using testing_qp::kind_of;

namespace {

Quiver triangle() {
  Quiver q(Grading{1, Degree{3}});
  for (int v = 0; v < 3; ++v) q.add_vertex(v, std::to_string(v));
  q.add_arrow("a", 0, 1, Degree{1});
  q.add_arrow("b", 1, 2, Degree{1});
  q.add_arrow("c", 2, 0, Degree{1});
  return q;
}

}  // namespace

TEST(Rational, ParsesAndNormalizes) {
  EXPECT_EQ(to_string(parse_rational("6/4")), "3/2");
  EXPECT_EQ(to_string(parse_rational("-2/4")), "-1/2");
  EXPECT_EQ(kind_of([] { parse_rational("2/-4"); }), ErrorKind::Parse);
  EXPECT_EQ(to_string(parse_rational(" 7 ")), "7");
  EXPECT_EQ(to_string(parse_rational("0/5")), "0");
  EXPECT_EQ(kind_of([] { parse_rational("1/0"); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([] { parse_rational("x"); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([] { parse_rational(""); }), ErrorKind::Parse);
}

TEST(Degree, Arithmetic) {
  const Degree a{1, 0, 2}, b{0, 3, -1};
  EXPECT_EQ(a + b, (Degree{1, 3, 1}));
  EXPECT_EQ(a - b, (Degree{1, -3, 3}));
  EXPECT_EQ(-a, (Degree{-1, 0, -2}));
  EXPECT_EQ(a.dot({1, 1, 1}), 3);
  EXPECT_EQ(a.str(), "(1,0,2)");
  EXPECT_LT(b, a);
}

TEST(Quiver, RejectsBadInput) {
  Quiver q = triangle();
  EXPECT_EQ(kind_of([&] { q.add_arrow("d", 0, 7, Degree{1}); }), ErrorKind::VertexAbsent);
  EXPECT_EQ(kind_of([&] { q.add_arrow("d", 0, 1, Degree{1, 1}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([&] { q.add_arrow(Arrow{0, "dup", 0, 1, Degree{1}}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([&] { q.add_vertex(1, "again"); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([&] { q.arrow(42); }), ErrorKind::ArrowAbsent);
  EXPECT_EQ(kind_of([&] { q.vertex(42); }), ErrorKind::VertexAbsent);
}

TEST(Quiver, PathsAndDegrees) {
  const Quiver q = triangle();
  const Path p{{0, 1}};
  EXPECT_EQ(path_source(q, p), 0);
  EXPECT_EQ(path_target(q, p), 2);
  EXPECT_FALSE(is_closed(q, p));
  EXPECT_TRUE(is_closed(q, Path{{0, 1, 2}}));
  EXPECT_EQ(path_degree(q, Path{{0, 1, 2}}), Degree{3});
  EXPECT_EQ(kind_of([&] { check_path(q, Path{{0, 2}}); }), ErrorKind::EndpointMismatch);
}

TEST(Quiver, LoopsAndTwoCycles) {
  const QPState z5 = mckay_cyclic({5, {1, 2, 2}});
  EXPECT_TRUE(loops(z5.quiver).empty());
  EXPECT_TRUE(two_cycles(z5.quiver).empty());

  // Double quiver of A~2: six arrows pairing up into three two-cycle vertex
  // pairs; by hand each unordered pair carries one edge and its star.
  const QPState pp = deformed_preprojective({"A~2", {1, 1, -2}});
  Quiver doubled(pp.quiver.grading());
  for (const auto& v : pp.quiver.vertices()) doubled.add_vertex(v.id, v.label);
  for (const auto& a : pp.quiver.arrows())
    if (!a.is_loop()) doubled.add_arrow(a);
  EXPECT_EQ(doubled.arrow_count(), 6u);
  EXPECT_TRUE(loops(doubled).empty());
  const auto tc = two_cycles(doubled);
  EXPECT_EQ(tc.size(), 3u);
  std::set<std::pair<VertexId, VertexId>> pairs;
  for (auto [a, b] : tc) {
    const auto& x = doubled.arrow(a);
    EXPECT_EQ(doubled.arrow(b).source, x.target);
    EXPECT_EQ(doubled.arrow(b).target, x.source);
    pairs.insert(std::minmax(x.source, x.target));
  }
  EXPECT_EQ(pairs.size(), 3u);
  EXPECT_EQ(loops(pp.quiver).size(), 3u);
}

TEST(CyclicWord, LeastRotationMatchesBruteForce) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 9)(rng);
    std::vector<ArrowId> w;
    for (int k = 0; k < n; ++k) w.push_back(std::uniform_int_distribution<int>(0, 3)(rng));
    EXPECT_EQ(CyclicWord::from_closed(w).arrows(), oracle::min_rotation(w));
  }
}

TEST(CyclicWord, RotationsOfAMcKayCycleAgree) {
  const QPState z5 = mckay_cyclic({5, {1, 2, 2}});
  // x1 at 0, x2 at 1, x3 at 3: 0 -> 1 -> 3 -> 0
  const std::vector<ArrowId> base{0, 3 * 1 + 1, 3 * 3 + 2};
  const CyclicWord w0 = canonical_cycle(z5.quiver, Path{base});
  for (std::size_t r = 1; r < 3; ++r) {
    std::vector<ArrowId> rot(base.begin() + static_cast<long>(r), base.end());
    rot.insert(rot.end(), base.begin(), base.begin() + static_cast<long>(r));
    EXPECT_EQ(canonical_cycle(z5.quiver, Path{rot}), w0);
  }
  EXPECT_EQ(path_degree(z5.quiver, w0.arrows()), (Degree{1, 1, 1}));
  EXPECT_EQ(kind_of([&] { canonical_cycle(z5.quiver, Path{{0, 4}}); }), ErrorKind::NotACycle);
}

TEST(Potential, ZeroCoefficientsVanish) {
  const Quiver q = triangle();
  Potential w;
  const CyclicWord c = canonical_cycle(q, Path{{1, 2, 0}});
  w.add(c, 2);
  w.add(c, -2);
  EXPECT_TRUE(w.empty());
  EXPECT_EQ(kind_of([&] { w.add(CyclicWord::from_closed({0}), 1); }), ErrorKind::InvalidArgument);
}

TEST(Potential, CapDropsLongWordsAndMarksInexact) {
  const Quiver q = triangle();
  Potential w(4);
  w.add(CyclicWord::from_closed({0, 1, 2}), 1);
  EXPECT_TRUE(w.exact());
  w.add(CyclicWord::from_closed({0, 1, 2, 0, 1, 2}), 1);
  EXPECT_FALSE(w.exact());
  EXPECT_EQ(w.terms().size(), 1u);
}

TEST(Potential, Homogeneity) {
  const QPState z5 = mckay_cyclic({5, {1, 2, 2}});
  EXPECT_EQ(is_homogeneous(z5.quiver, z5.potential), (Degree{1, 1, 1}));
  Quiver q = triangle();
  q.add_arrow("d", 0, 1, Degree{2});
  Potential w;
  w.add(CyclicWord::from_closed({0, 1, 2}), 1);
  w.add(CyclicWord::from_closed({3, 1, 2}), 1);
  EXPECT_FALSE(is_homogeneous(q, w).has_value());
}

TEST(Potential, CyclicDerivative) {
  const Quiver q = triangle();
  Potential w;
  w.add(CyclicWord::from_closed({0, 1, 2}), 3);
  w.add(CyclicWord::from_closed({0, 1, 2, 0, 1, 2}), 1);
  const PathSum d = cyclic_derivative(q, w, 0);
  // d_a(abc) = bc; d_a(abcabc) = 2 bcabc
  EXPECT_EQ(d.coefficient(Path{{1, 2}}), 3);
  EXPECT_EQ(d.coefficient(Path{{1, 2, 0, 1, 2}}), 2);
  EXPECT_EQ(d.size(), 2u);
}

TEST(Substitute, ExpandsMultilinearly) {
  Quiver q = triangle();
  q.add_arrow("a2", 0, 1, Degree{1});  // id 3, parallel to a
  Potential w(16);
  w.add(CyclicWord::from_closed({0, 1, 2}), 1);
  PathSum repl = PathSum::single(Path{{0}});
  repl.add(Path{{3}}, Rational(1, 2));
  const Potential out = substitute(q, w, {{0, repl}}, 16);
  EXPECT_EQ(out.coefficient(CyclicWord::from_closed({0, 1, 2})), 1);
  EXPECT_EQ(out.coefficient(CyclicWord::from_closed({3, 1, 2})), Rational(1, 2));
  EXPECT_TRUE(out.exact());

  PathSum bad = PathSum::single(Path{{1}});
  EXPECT_EQ(kind_of([&] { substitute(q, w, {{0, bad}}, 16); }), ErrorKind::EndpointMismatch);
  // Substituting a by zero kills the word.
  EXPECT_TRUE(substitute(q, w, {{0, PathSum{}}}, 16).empty());
}

TEST(Substitute, CapTruncates) {
  Quiver q = triangle();
  q.add_arrow("x", 0, 2, Degree{2});
  q.add_arrow("y", 2, 1, Degree{0});  // only used to build a long replacement
  Potential w(3);
  w.add(CyclicWord::from_closed({0, 1, 2}), 1);
  PathSum repl = PathSum::single(Path{{0}});
  repl.add(Path{{3, 4}}, 1);  // a -> a + x y
  const Potential out = substitute(q, w, {{0, repl}}, 3);
  EXPECT_FALSE(out.exact());
  EXPECT_EQ(out.terms().size(), 1u);
}

TEST(Linalg, RankAgreesWithDenseOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int r = std::uniform_int_distribution<int>(1, 6)(rng);
    const int c = std::uniform_int_distribution<int>(1, 6)(rng);
    std::vector<std::vector<Rational>> m(r, std::vector<Rational>(c, 0));
    std::vector<SparseRow> sparse(r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) {
        if (std::bernoulli_distribution(0.5)(rng)) continue;
        m[i][j] = Rational(std::uniform_int_distribution<int>(-2, 2)(rng), std::uniform_int_distribution<int>(1, 3)(rng));
        m[i][j].canonicalize();
        if (m[i][j] != 0) sparse[i][static_cast<std::size_t>(j)] = m[i][j];
      }
    // Duplicate a combination to force dependence now and then.
    if (r > 1 && std::bernoulli_distribution(0.5)(rng)) {
      m.push_back(m[0]);
      for (int j = 0; j < c; ++j) m.back()[j] += 2 * m[1][j];
      SparseRow extra;
      for (int j = 0; j < c; ++j)
        if (m.back()[j] != 0) extra[static_cast<std::size_t>(j)] = m.back()[j];
      sparse.push_back(extra);
    }
    EXPECT_EQ(rank(sparse), oracle::dense_rank(m));
    EXPECT_EQ(rank(m), oracle::dense_rank(m));
  }
}

TEST(Validate, ChecksHorizonAndCycles) {
  QPState qp = mckay_cyclic({5, {1, 2, 2}});
  EXPECT_NO_THROW(validate(qp));
  qp.faithful_horizon = 3;
  EXPECT_THROW(validate(qp), Error);
  qp.potential.mark_inexact();
  EXPECT_NO_THROW(validate(qp));
  qp.faithful_horizon = 40;
  EXPECT_THROW(validate(qp), Error);
}

TEST(LengthCap, EnvironmentOverride) {
  ::unsetenv("QPMUT_LENGTH_CAP");
  EXPECT_EQ(default_length_cap(), 16u);
  ::setenv("QPMUT_LENGTH_CAP", "24", 1);
  EXPECT_EQ(default_length_cap(), 24u);
  ::setenv("QPMUT_LENGTH_CAP", "junk", 1);
  EXPECT_EQ(default_length_cap(), 16u);
  ::unsetenv("QPMUT_LENGTH_CAP");
}
