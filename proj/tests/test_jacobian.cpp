#include <gtest/gtest.h>

#include "qpmut/generators.hpp"
#include "qpmut/jacobian.hpp"
#include "qpmut/mutation.hpp"
#include "support/errors.hpp"
#include "support/oracles.hpp"
#include "support/random_qp.hpp"

using namespace qpmut;
using testing_qp::kind_of;

namespace {

std::map<ArrowId, int> unit_weights(const Quiver& q) {
  std::map<ArrowId, int> w;
  for (const auto& a : q.arrows()) w[a.id] = static_cast<int>(a.degree.dot(std::vector<std::int64_t>(q.grading().rank, 1)));
  return w;
}

}  // namespace

TEST(Dims, Z5IsSkewGroupRing) {
  const QPState z5 = mckay_cyclic({5, {1, 2, 2}});
  const DimensionTable t = graded_dims(z5, 5);
  const auto totals = t.totals();
  ASSERT_EQ(totals.size(), 6u);
  for (int d = 0; d <= 5; ++d) EXPECT_EQ(totals[static_cast<std::size_t>(d)], oracle::skew_group_dim(5, d)) << d;
  EXPECT_EQ(t.exact_up_to, 5);
  // each monomial degree (i,j,k) contributes n
  EXPECT_EQ(t.at(Degree{1, 1, 1}), 5);
  EXPECT_EQ(t.at(Degree{2, 0, 0}), 5);
}

TEST(Dims, RandomCubicAgainstBruteForce) {
  testing_qp::Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const QPState qp = testing_qp::random_cubic(rng, false);
    const auto expected = oracle::jacobian_dims(qp, unit_weights(qp.quiver), 4);
    EXPECT_EQ(graded_dims(qp, 4).totals(), expected) << "trial " << trial;
  }
}

TEST(Dims, McKayAgainstBruteForce) {
  testing_qp::Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const QPState qp = testing_qp::random_mckay(rng);
    EXPECT_EQ(graded_dims(qp, 3).totals(), oracle::jacobian_dims(qp, unit_weights(qp.quiver), 3));
  }
}

TEST(Dims, OneLoopZeroPotential) {
  Quiver q(Grading{1, Degree{2}});
  q.add_vertex(0, "0");
  q.add_arrow("x", 0, 0, Degree{1});
  const DimensionTable t = graded_dims(QPState{q, Potential{}, std::nullopt}, 6);
  EXPECT_EQ(t.totals(), std::vector<std::int64_t>(7, 1));
}

TEST(Dims, PreprojectiveLowDegrees) {
  const QPState qp = deformed_preprojective({"A~2", {1, 1, -2}});
  const auto totals = graded_dims(qp, 5).totals();
  EXPECT_EQ(totals[0], 3);
  EXPECT_EQ(totals[1], 6);
  EXPECT_EQ(totals, oracle::jacobian_dims(qp, unit_weights(qp.quiver), 5));
}

TEST(Dims, NonPositiveGrading) {
  // mu_0 of Z/6 has arrows of negative degree under the all-ones functional
  const QPState mu = mutate(mckay_cyclic({6, {2, 5, 5}}), 0).first;
  try {
    graded_dims(mu, 3);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonPositiveGrading);
    EXPECT_NE(std::string(e.what()).find("degree-wise finiteness not guaranteed"), std::string::npos);
  }
}

TEST(Dims, NotHomogeneous) {
  Quiver q(Grading{1, Degree{2}});
  q.add_vertex(0, "0");
  q.add_arrow("x", 0, 0, Degree{1});
  Potential w;
  w.add(CyclicWord::from_closed({0, 0}), 1);
  w.add(CyclicWord::from_closed({0, 0, 0}), 1);
  EXPECT_EQ(kind_of([&] { graded_dims(QPState{q, w, std::nullopt}, 3); }), ErrorKind::NotHomogeneous);
}

TEST(Dims, FunctionalChoice) {
  const QPState z5 = mckay_cyclic({5, {1, 2, 2}});
  DimsOptions opt;
  opt.functional = std::vector<std::int64_t>{1, 2, 3};
  const DimensionTable t = graded_dims(z5, 4, opt);
  // degree (a,b,c) has value a + 2b + 3c; 5 per monomial
  EXPECT_EQ(t.totals(), (std::vector<std::int64_t>{5, 5, 10, 15, 20}));
  opt.functional = std::vector<std::int64_t>{1, 1};
  EXPECT_EQ(kind_of([&] { graded_dims(z5, 2, opt); }), ErrorKind::InvalidArgument);
}

TEST(Dims, ThreadInvariant) {
  const QPState qp = mckay_cyclic({7, {1, 2, 4}});
  DimsOptions many;
  many.threads = 4;
  EXPECT_EQ(graded_dims(qp, 5).dims, graded_dims(qp, 5, many).dims);
  EXPECT_EQ(hh0_dims(qp, 5).dims, hh0_dims(qp, 5, many).dims);
}

TEST(Dims, ExactnessFromHorizon) {
  QPState z5 = mckay_cyclic({5, {1, 2, 2}});
  z5.potential.mark_inexact();
  z5.faithful_horizon = 2;
  // words of length 3 may be missing: only degrees below r - max weight are safe
  EXPECT_EQ(graded_dims(z5, 4).exact_up_to, 1);
  z5.faithful_horizon = 8;
  EXPECT_EQ(graded_dims(z5, 4).exact_up_to, 4);
}

TEST(HH0, DegreeZeroIsVertexCount) {
  for (const QPState& qp : {mckay_cyclic({5, {1, 2, 2}}), deformed_preprojective({"A~2", {1, 1, -2}}),
                            mckay_cyclic({7, {1, 2, 4}})}) {
    EXPECT_EQ(hh0_dims(qp, 0).totals()[0], static_cast<std::int64_t>(qp.quiver.vertex_count()));
  }
}

TEST(HH0, Z5LengthGrading) {
  const QPState qp = with_length_grading(mckay_cyclic({5, {1, 2, 2}}));
  EXPECT_EQ(qp.quiver.grading().rank, 1u);
  EXPECT_EQ(qp.quiver.grading().potential_degree, Degree{3});
  const auto totals = hh0_dims(qp, 4).totals();
  EXPECT_EQ(totals[1], 0);
  EXPECT_EQ(totals, oracle::hh0_dims(qp, unit_weights(qp.quiver), 4));
}

TEST(HH0, PreprojectiveDegreeTwo) {
  const QPState qp = deformed_preprojective({"A~2", {1, 1, -2}});
  const auto totals = hh0_dims(qp, 4).totals();
  EXPECT_GT(totals[2], 0);
  EXPECT_EQ(totals, oracle::hh0_dims(qp, unit_weights(qp.quiver), 4));
}

TEST(HH0, RandomCubicAgainstBruteForce) {
  testing_qp::Rng rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const QPState qp = testing_qp::random_cubic(rng, false);
    const auto hh = hh0_dims(qp, 4).totals();
    EXPECT_EQ(hh, oracle::hh0_dims(qp, unit_weights(qp.quiver), 4)) << "trial " << trial;
    const auto jac = graded_dims(qp, 4).totals();
    for (std::size_t d = 0; d < hh.size(); ++d) EXPECT_LE(hh[d], jac[d]);
  }
}
