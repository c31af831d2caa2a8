#include <random>

#include <gtest/gtest.h>

#include "mqv/generators.hpp"
#include "mqv/intertwiner.hpp"
#include "mqv/linalg.hpp"
#include "mqv/star_bridge.hpp"
#include "test_util.hpp"

using namespace mqv;
using mqv::testing::q;
using mqv::testing::qm;
using mqv::testing::scalar_matrix;

namespace {

std::vector<std::vector<Rational>> flat_weights(const std::vector<int>& arms) {
  std::vector<std::vector<Rational>> b;
  for (int l : arms) {
    b.emplace_back();
    for (int j = 0; j <= l; ++j) b.back().emplace_back(j);
  }
  return b;
}

// Characteristic polynomial of a 2x2 matrix: t^2 - tr t + det.
std::pair<GaussRational, GaussRational> charpoly2(const QMatrix& a) {
  return {a(0, 0) + a(1, 1), det(a)};
}

}  // namespace

TEST(ParamsFromWeights, SingleTrivialArm) {
  StarQuiver sq = build_star({0});
  auto [qv, theta] = params_from_weights(sq, {{q("1")}}, {{Rational(0)}}, {1});
  EXPECT_EQ(qv, (QVector{q("1")}));
  EXPECT_EQ(theta, (ThetaVector{Rational(0)}));
}

TEST(ParamsFromWeights, TwoRankOneLadders) {
  StarQuiver sq = build_star({0, 0});
  auto [qv, theta] = params_from_weights(sq, {{q("2")}, {q("1/2")}}, {{Rational(0)}, {Rational(0)}}, {1});
  EXPECT_EQ(qv[sq.center()], q("1"));
}

TEST(ParamsFromWeights, ConstraintAndWeightChecks) {
  StarQuiver sq = build_star({1, 1, 1});
  DimVector dims = star_dims(sq, 2, {{1}, {1}, {1}});
  // q^dims = prod_i (xi_{i,0} xi_{i,1})^{-1}, so the product of all ladder entries must be 1.
  std::vector<std::vector<GaussRational>> good{{q("2"), q("3")}, {q("1/2"), q("5")}, {q("1/3"), q("1/5")}};
  std::vector<std::vector<Rational>> beta{{Rational(0), Rational(1)}, {Rational(0), ratio(1, 2)}, {Rational(1), Rational(3)}};
  auto [qv, theta] = params_from_weights(sq, good, beta, dims);
  EXPECT_TRUE(q_power(qv, dims).is_one());
  EXPECT_EQ(theta_dot(theta, dims), Rational(0));
  EXPECT_EQ(theta[sq.vertex(3, 1)], Rational(2));
  EXPECT_EQ(qv[sq.vertex(1, 1)], q("2/3"));

  auto bad = good;
  bad[0][0] = q("7");
  EXPECT_THROW(params_from_weights(sq, bad, beta, dims), ContractViolation);
  auto flat = beta;
  flat[1] = {Rational(1), Rational(1)};
  EXPECT_THROW(params_from_weights(sq, good, flat, dims), ContractViolation);
  auto zero = good;
  zero[2][1] = q("0");
  EXPECT_THROW(params_from_weights(sq, zero, beta, dims), ContractViolation);
}

TEST(ParamsFromWeights, RandomLaddersSatisfyDictionary) {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 20; ++k) {
    LocalSystemData d = generate_star_tuple(3 + k % 2, rng);
    auto [sq, x] = tuple_to_rep(d);
    auto [qv, theta] = params_from_weights(sq, d.ladders, d.beta, x.dims());
    EXPECT_TRUE(q_power(qv, x.dims()).is_one());
    EXPECT_EQ(theta_dot(theta, x.dims()), Rational(0));
  }
}

TEST(RepToTuple, ScalarArmsGiveInverseEigenvalues) {
  StarQuiver sq = build_star({1, 1});
  Representation x(sq.dq, star_dims(sq, 1, {{0}, {0}}));
  const GaussRational c = q("3/7+1/2*i");
  RepToTupleResult r = rep_to_tuple(sq, x, {{c, q("5")}, {c.inverse(), q("2")}});
  EXPECT_EQ(r.data.matrices[0], QMatrix::scalar(1, c));
  EXPECT_EQ(r.data.matrices[1], QMatrix::scalar(1, c.inverse()));
  EXPECT_TRUE(r.data.product_is_one());
  EXPECT_TRUE(r.containments);
}

TEST(RepToTuple, EmptyArmIsIdentity) {
  StarQuiver sq = build_star({0});
  Representation x(sq.dq, {3});
  RepToTupleResult r = rep_to_tuple(sq, x, {{q("1")}});
  EXPECT_TRUE(r.data.matrices[0].is_identity());
}

TEST(RepToTuple, RejectsNonSolutions) {
  StarQuiver sq = build_star({1});
  Representation x(sq.dq, {1, 1});
  x.set_map(sq.a(1, 0), scalar_matrix("1"));
  x.set_map(sq.b(1, 0), scalar_matrix("1"));
  EXPECT_THROW(rep_to_tuple(sq, x, {{q("1"), q("1")}}), ContractViolation);
}

TEST(TupleToRep, DiagonalByHand) {
  // A = diag(2, 1/2) twice would not multiply to 1; use A_1 = diag(2, 3), A_2 = A_1^{-1}.
  LocalSystemData d;
  d.r = 2;
  d.matrices = {qm({{"2", "0"}, {"0", "3"}}), qm({{"1/2", "0"}, {"0", "1/3"}})};
  d.ladders = {{q("2"), q("3")}, {q("1/3"), q("1/2")}};
  d.flags = std::vector<std::vector<QMatrix>>{{qm({{"0"}, {"1"}})}, {qm({{"1"}, {"0"}})}};
  auto [sq, x] = tuple_to_rep(d);
  EXPECT_EQ(x.dims(), (DimVector{2, 1, 1}));
  EXPECT_TRUE(solves_relation(x, star_q(sq, d.ladders)));
  EXPECT_EQ(x.map(sq.a(1, 0)), qm({{"0"}, {"1"}}));
  EXPECT_EQ(x.map(sq.b(1, 0)), qm({{"0", "1/2"}}));
}

TEST(TupleToRep, IdentityTupleHasZeroArms) {
  LocalSystemData d;
  d.r = 2;
  d.matrices = {QMatrix::identity(2), QMatrix::identity(2), QMatrix::identity(2)};
  d.ladders = {{q("1"), q("1")}, {q("1"), q("1")}, {q("1")}};
  d.flags = std::vector<std::vector<QMatrix>>{{QMatrix::identity(2)}, {qm({{"1"}, {"1"}})}, {}};
  auto [sq, x] = tuple_to_rep(d);
  EXPECT_TRUE(x.map(sq.b(1, 0)).is_zero());
  EXPECT_TRUE(x.map(sq.b(2, 0)).is_zero());
}

TEST(TupleToRep, FlagErrors) {
  LocalSystemData d;
  d.r = 2;
  d.matrices = {qm({{"2", "1"}, {"0", "3"}}), inverse(qm({{"2", "1"}, {"0", "3"}}))};
  d.ladders = {{q("2"), q("3")}, {q("1/3"), q("1/2")}};
  // Im(A_1 - 2) is spanned by (1, 1); (0, 1) is not A_1-stable.
  d.flags = std::vector<std::vector<QMatrix>>{{qm({{"0"}, {"1"}})}, image_ladder_flags(d.matrices[1], d.ladders[1])};
  EXPECT_THROW(tuple_to_rep(d), ContractViolation);
  (*d.flags)[0] = image_ladder_flags(d.matrices[0], d.ladders[0]);
  EXPECT_NO_THROW(tuple_to_rep(d));
  d.matrices[1] = QMatrix::identity(2);
  EXPECT_THROW(tuple_to_rep(d), ContractViolation);
}

TEST(StarBridge, RoundTripOnRandomTuples) {
  std::mt19937_64 rng(77);
  for (int k = 0; k < 10; ++k) {
    LocalSystemData d = generate_star_tuple(3 + k % 3, rng);
    ASSERT_TRUE(d.product_is_one());
    auto [sq, x] = tuple_to_rep(d);
    EXPECT_TRUE(solves_relation(x, star_q(sq, d.ladders)));
    RepToTupleResult back = rep_to_tuple(sq, x, d.ladders, true);
    EXPECT_EQ(back.data.matrices, d.matrices);
    EXPECT_TRUE(back.containments) << back.detail;
    EXPECT_TRUE(back.flag_dims) << back.detail;
    // The rebuilt rep is G_V-isomorphic to x.
    auto [sq2, x2] = tuple_to_rep(back.data);
    UnknownShapes shapes;
    for (long v : x.dims()) shapes.emplace_back(v, v);
    std::vector<LinearConstraint> cs;
    for (std::size_t h = 0; h < sq.dq.num_arrows(); ++h) {
      const auto& a = sq.dq.arrow(h);
      cs.push_back({{{a.in, QMatrix::identity(x.dim(a.in)), x.map(h)},
                     {a.out, -x2.map(h), QMatrix::identity(x.dim(a.out))}},
                    QMatrix(x.dim(a.in), x.dim(a.out))});
    }
    EXPECT_TRUE(solve_sylvester_intertwiner(shapes, cs, true, rng, 32).has_value());
  }
}

TEST(StarBridge, RigidHypergeometricShape) {
  std::mt19937_64 rng(5);
  GeneratedSolution s = generate_star_solution(3, rng);
  StarQuiver sq = build_star({1, 1, 1});
  ASSERT_EQ(s.x.dims(), (DimVector{2, 1, 1, 1}));
  // The dictionary: Phi_0 = prod (1 + a b) = q_0 means prod_i xi_{i,0}^{-1} A_i = q_0.
  QMatrix p = QMatrix::identity(2);
  for (int i = 1; i <= 3; ++i) p = p * (QMatrix::identity(2) + s.x.map(sq.a(i, 0)) * s.x.map(sq.b(i, 0)));
  EXPECT_EQ(p, QMatrix::scalar(2, s.q[sq.center()]));
  // Each 1 + a b has eigenvalues 1 and 1/q_{i,1}.
  for (int i = 1; i <= 3; ++i) {
    QMatrix f = QMatrix::identity(2) + s.x.map(sq.a(i, 0)) * s.x.map(sq.b(i, 0));
    auto [tr, dt] = charpoly2(f);
    const GaussRational other = s.q[sq.vertex(i, 1)].inverse();
    EXPECT_EQ(tr, GaussRational(1L) + other);
    EXPECT_EQ(dt, other);
  }
}

TEST(StarBridge, TupleSpectraMatchLadders) {
  std::mt19937_64 rng(6);
  LocalSystemData d = generate_star_tuple(3, rng);
  QMatrix p = QMatrix::identity(2);
  for (std::size_t i = 0; i < 3; ++i) {
    auto [tr, dt] = charpoly2(d.matrices[i]);
    EXPECT_EQ(tr, d.ladders[i][0] + d.ladders[i][1]);
    EXPECT_EQ(dt, d.ladders[i][0] * d.ladders[i][1]);
    p = p * d.matrices[i];
  }
  EXPECT_TRUE(p.is_identity());
}

TEST(StarBridge, CenterRelationIffProductOne) {
  std::mt19937_64 rng(9);
  LocalSystemData d = generate_star_tuple(4, rng);
  auto [sq, x] = tuple_to_rep(d);
  const QVector qv = star_q(sq, d.ladders);
  EXPECT_TRUE(check_relation(x, qv).residual[sq.center()].is_zero());
  // Scaling one b breaks both sides together.
  Representation y = x;
  y.set_map(sq.b(2, 0), x.map(sq.b(2, 0)) * q("2"));
  QMatrix a2 = (QMatrix::identity(2) + y.map(sq.a(2, 0)) * y.map(sq.b(2, 0))) * d.ladders[1][0];
  std::vector<QMatrix> ms = d.matrices;
  ms[1] = a2;
  QMatrix p = QMatrix::identity(2);
  for (const auto& m : ms) p = p * m;
  EXPECT_FALSE(p.is_identity());
  EXPECT_FALSE(check_relation(y, qv).residual[sq.center()].is_zero());
}

TEST(BetaStability, IrreducibleTupleIsVacuous) {
  std::mt19937_64 rng(12);
  LocalSystemData d = generate_star_tuple(3, rng);
  BetaStabilityReport r = beta_stability_report(d);
  EXPECT_TRUE(r.candidates.empty());
  EXPECT_FALSE(r.semistability_disproved);
}

TEST(BetaStability, UnbalancedBlocksViolate) {
  // Two scalar blocks: M = first coordinate line is invariant under both matrices.
  LocalSystemData d;
  d.r = 2;
  d.matrices = {qm({{"2", "0"}, {"0", "3"}}), qm({{"1/2", "0"}, {"0", "1/3"}})};
  d.ladders = {{q("3"), q("2")}, {q("1/2"), q("1/3")}};
  d.beta = {{Rational(0), Rational(5)}, {Rational(0), Rational(1)}};
  BetaStabilityReport r = beta_stability_report(d);
  ASSERT_EQ(r.candidates.size(), 2u);
  EXPECT_TRUE(r.semistability_disproved);
  bool found = false;
  for (const auto& c : r.candidates) {
    if (c.basis == qm({{"1"}, {"0"}})) {
      // F_1^1 = Im(A_1 - 3) = e_1, F_2^1 = Im(A_2 - 1/2) = e_2: lhs = 5, rhs = (5 + 1)/2.
      EXPECT_EQ(c.lhs, Rational(5));
      EXPECT_EQ(c.rhs, Rational(3));
      EXPECT_TRUE(c.violates_semistability);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(BetaStability, FullSpaceSeedIsExcluded) {
  LocalSystemData d;
  d.r = 2;
  d.matrices = {QMatrix::identity(2)};
  d.ladders = {{q("1")}};
  d.beta = {{Rational(0)}};
  BetaStabilityReport r = beta_stability_report(d, {QMatrix::identity(2)});
  EXPECT_TRUE(r.candidates.empty());
}

TEST(TraceCoordinates, EmptyAndWorkedExample) {
  DoubledQuiver dq(named_quiver("A2"));
  Representation x(dq, {1, 1});
  x.set_map("a1", scalar_matrix("1"));
  x.set_map("~a1", scalar_matrix("1"));
  EXPECT_TRUE(trace_coordinates(x, {}).empty());
  auto t = trace_coordinates(x, {{"~a1", "a1"}});
  EXPECT_EQ(t.at("~a1,a1"), q("1"));
  EXPECT_THROW(trace_coordinates(x, {{"a1", "a1"}}), ContractViolation);
}

TEST(TraceCoordinates, InvariantUnderConjugation) {
  std::mt19937_64 rng(50);
  DoubledQuiver dq(named_quiver("affine-A3"));
  Representation x = random_representation(dq, {2, 1, 2}, rng);
  auto cycles = enumerate_cycles(dq, 4);
  ASSERT_GE(cycles.size(), 10u);
  Representation y = act(random_group_element(rng, x.dims()), x);
  auto tx = trace_coordinates(x, cycles), ty = trace_coordinates(y, cycles);
  EXPECT_EQ(tx, ty);
}
