#include <random>

#include <gtest/gtest.h>

#include "mqv/generators.hpp"
#include "mqv/linalg.hpp"
#include "mqv/stability.hpp"
#include "test_util.hpp"

using namespace mqv;
using mqv::testing::q;
using mqv::testing::qm;
using mqv::testing::scalar_matrix;

namespace {

ThetaVector th(std::initializer_list<long> v) {
  ThetaVector t;
  for (long e : v) t.emplace_back(e);
  return t;
}

DoubledQuiver a2() { return DoubledQuiver(named_quiver("A2")); }

}  // namespace

TEST(FramedStability, InjectiveBIsStable) {
  DoubledQuiver dq(named_quiver("A1"));
  FramedRepresentation x(Representation(dq, {1}), {1}, {scalar_matrix("1")}, {scalar_matrix("1")});
  StabilityVerdict v = check_framed_stability(x, th({1}));
  EXPECT_EQ(v.status, StabilityStatus::Stable);
  EXPECT_EQ(v.method, StabilityMethod::ExactFixpoint);
  EXPECT_FALSE(v.certificate.has_value());
}

TEST(FramedStability, ZeroFramingIsUnstableWithWholeSpace) {
  DoubledQuiver dq = a2();
  FramedRepresentation x(Representation(dq, {1, 1}), {1, 0});
  StabilityVerdict v = check_framed_stability(x, th({1, 2}));
  ASSERT_EQ(v.status, StabilityStatus::Unstable);
  ASSERT_TRUE(v.certificate);
  EXPECT_TRUE(v.on_extension);
  EXPECT_EQ(v.certificate->subspace.dims(), (DimVector{1, 1, 0}));
  EXPECT_EQ(v.certificate->theta_dim, Rational(3));
}

TEST(FramedStability, BInjectiveAtEveryVertex) {
  DoubledQuiver dq = a2();
  Representation base(dq, {1, 1});
  base.set_map("a1", scalar_matrix("2"));
  FramedRepresentation x(base, {1, 1}, {scalar_matrix("1"), scalar_matrix("0")},
                         {scalar_matrix("1"), scalar_matrix("-1")});
  EXPECT_EQ(check_framed_stability(x, th({1, 1})).status, StabilityStatus::Stable);
}

TEST(FramedStability, KerBNeedsInvariance) {
  // Ker b = V_1 but a1 moves it into V_2 where b is injective.
  DoubledQuiver dq = a2();
  Representation base(dq, {1, 1});
  base.set_map("a1", scalar_matrix("1"));
  FramedRepresentation x(base, {0, 1});
  x.b[1] = scalar_matrix("1");
  EXPECT_EQ(check_framed_stability(x, th({1, 1})).status, StabilityStatus::Stable);
  base.set_map("a1", scalar_matrix("0"));
  FramedRepresentation y(base, {0, 1});
  y.b[1] = scalar_matrix("1");
  StabilityVerdict v = check_framed_stability(y, th({1, 1}));
  ASSERT_EQ(v.status, StabilityStatus::Unstable);
  EXPECT_EQ(v.certificate->subspace.dims(), (DimVector{1, 0, 0}));
}

TEST(FramedStability, NonPositiveThetaIsRouted) {
  DoubledQuiver dq = a2();
  FramedRepresentation x(Representation(dq, {1, 0}), {1, 0});
  x.a[0] = scalar_matrix("1");
  StabilityVerdict v = check_framed_stability(x, th({-1, 1}));
  EXPECT_TRUE(v.on_extension);
  EXPECT_EQ(v.method, StabilityMethod::ExhaustiveTiny);
  EXPECT_NE(v.note.find("routed"), std::string::npos);
  EXPECT_EQ(v.status, StabilityStatus::Stable);
}

TEST(GeneralStability, ZeroRepIsUnstableAtPositiveVertex) {
  DoubledQuiver dq = a2();
  Representation x(dq, {1, 1});
  StabilityVerdict v = check_general_stability(x, th({1, -1}));
  ASSERT_EQ(v.status, StabilityStatus::Unstable);
  EXPECT_EQ(v.certificate->subspace.dims(), (DimVector{1, 0}));
  EXPECT_TRUE(verify_certificate(x, th({1, -1}), v));
}

TEST(GeneralStability, SimpleRootIsStable) {
  DoubledQuiver dq = a2();
  Representation x(dq, {0, 1});
  EXPECT_EQ(check_general_stability(x, th({5, 0})).status, StabilityStatus::Stable);
}

TEST(GeneralStability, A2WorkedExampleIsStable) {
  DoubledQuiver dq = a2();
  Representation x(dq, {1, 1});
  x.set_map("a1", scalar_matrix("1"));
  x.set_map("~a1", scalar_matrix("1"));
  StabilityVerdict v = check_general_stability(x, th({1, -1}));
  EXPECT_EQ(v.status, StabilityStatus::Stable);
  EXPECT_EQ(v.method, StabilityMethod::ExhaustiveTiny);
}

TEST(GeneralStability, ZeroThetaGivesSemistable) {
  DoubledQuiver dq = a2();
  Representation x(dq, {1, 1});
  StabilityVerdict v = check_general_stability(x, th({0, 0}));
  EXPECT_EQ(v.status, StabilityStatus::SemistableNotStable);
  EXPECT_EQ(v.certificate->theta_dim, Rational(0));
}

TEST(GeneralStability, TieBreakPrefersSmallestDestabilizer) {
  DoubledQuiver dq = a2();
  Representation x(dq, {2, 1});
  StabilityVerdict v = check_general_stability(x, th({1, -2}));
  ASSERT_EQ(v.status, StabilityStatus::Unstable);
  EXPECT_EQ(v.certificate->subspace.total_dim(), 1);
}

TEST(GeneralStability, ThetaMustAnnihilateDims) {
  DoubledQuiver dq = a2();
  Representation x(dq, {1, 1});
  EXPECT_THROW(check_general_stability(x, th({1, 1})), ContractViolation);
}

TEST(GeneralStability, RandomizedTierReportsUnknownOrCertificate) {
  std::mt19937_64 rng(4);
  DoubledQuiver dq(named_quiver("A3"));
  GeneratedSolution s = generate_by_reflection(dq, {1, 1, 1}, rng);
  StabilityOptions opts;
  opts.tiny_bound = 2;
  opts.q = s.q;
  ThetaVector t = th({1, 1, -2});
  StabilityVerdict v = check_general_stability(s.x, t, opts);
  EXPECT_EQ(v.method, StabilityMethod::RandomizedSearch);
  EXPECT_EQ(v.status, StabilityStatus::Unknown);
  EXPECT_NE(v.note.find("generic"), std::string::npos);

  Representation zero(dq, {1, 1, 1});
  StabilityVerdict u = check_general_stability(zero, t, opts);
  EXPECT_EQ(u.status, StabilityStatus::Unstable);
  EXPECT_TRUE(verify_certificate(zero, t, u));
}

TEST(GeneralStability, TamperedCertificateIsRejected) {
  DoubledQuiver dq = a2();
  Representation x(dq, {1, 1});
  x.set_map("a1", scalar_matrix("1"));
  StabilityVerdict v = check_general_stability(x, th({-1, 1}));
  ASSERT_EQ(v.status, StabilityStatus::Unstable);
  EXPECT_TRUE(verify_certificate(x, th({-1, 1}), v));
  StabilityVerdict bad = v;
  bad.certificate->subspace.basis = {QMatrix::identity(1), QMatrix(1, 0)};  // V_1 is not invariant
  EXPECT_FALSE(verify_certificate(x, th({-1, 1}), bad));
  bad = v;
  bad.status = StabilityStatus::SemistableNotStable;
  EXPECT_FALSE(verify_certificate(x, th({-1, 1}), bad));
}

TEST(StabilityCrossValidation, FramedAgreesWithTinyOnExtension) {
  std::mt19937_64 rng(99);
  DoubledQuiver dq(named_quiver("A2"));
  std::uniform_int_distribution<long> d(0, 2), t(1, 4);
  int checked = 0;
  for (int k = 0; k < 60; ++k) {
    DimVector v{d(rng), d(rng)}, w{d(rng), d(rng) % 2};
    if (total(v) + 1 > 5) continue;
    FramedRepresentation x = random_framed(dq, v, w, rng, 0.6);
    ThetaVector theta{Rational(t(rng)), ratio(t(rng), 2)};
    StabilityVerdict framed = check_framed_stability(x, theta);
    FramedExtension ext = frame(x, QVector(2, GaussRational(1L)), theta);
    StabilityVerdict tiny = check_general_stability(ext.x, ext.theta);
    EXPECT_EQ(framed.status, tiny.status) << "instance " << k;
    ++checked;
  }
  EXPECT_GE(checked, 30);
}

TEST(AssociatedGraded, TrivialFiltrationKeepsX) {
  DoubledQuiver dq = a2();
  Representation x(dq, {1, 1});
  x.set_map("a1", scalar_matrix("3"));
  Representation g = associated_graded(x, {}, th({1, -1}));
  EXPECT_EQ(g.maps(), x.maps());
}

TEST(AssociatedGraded, BlockUpperTriangularGivesDiagonalPart) {
  DoubledQuiver dq(named_quiver("jordan"));
  Representation x(dq, {2});
  x.set_map("l", qm({{"1", "5"}, {"0", "2"}}));
  x.set_map("~l", qm({{"3", "7"}, {"0", "4"}}));
  Subspace line;
  line.basis = {qm({{"1"}, {"0"}})};
  Representation g = associated_graded(x, {line}, th({0}));
  EXPECT_EQ(g.map("l"), qm({{"1", "0"}, {"0", "2"}}));
  EXPECT_EQ(g.map("~l"), qm({{"3", "0"}, {"0", "4"}}));

  Subspace bad;
  bad.basis = {qm({{"0"}, {"1"}})};
  EXPECT_THROW(associated_graded(x, {bad}, th({0})), ContractViolation);
}

TEST(AssociatedGraded, ZeroStaysZeroAndRelationIsKept) {
  DoubledQuiver dq = a2();
  Representation zero(dq, {1, 1});
  Subspace s;
  s.basis = {QMatrix(1, 0), QMatrix::identity(1)};
  EXPECT_TRUE(associated_graded(zero, {s}, th({0, 0})).maps() == zero.maps());

  // x_h = 1, x_hbar = 0 solves Phi = 1 with invariant 0 + V_2.
  Representation x(dq, {1, 1});
  x.set_map("a1", scalar_matrix("1"));
  QVector one{q("1"), q("1")};
  ASSERT_TRUE(solves_relation(x, one));
  Representation g = associated_graded(x, {s}, th({0, 0}));
  EXPECT_TRUE(solves_relation(g, one));
  EXPECT_TRUE(g.map("a1").is_zero());
}

TEST(AssociatedGraded, DirectSumInAnyBasisKeepsRelation) {
  std::mt19937_64 rng(17);
  DoubledQuiver dq(named_quiver("A3"));
  GeneratedSolution s = generate_by_reflection(dq, {1, 1, 1}, rng);
  // x ⊕ x in a random basis; F^1 = image of the first summand.
  std::vector<QMatrix> maps;
  for (std::size_t h = 0; h < dq.num_arrows(); ++h) maps.push_back(block_diagonal(std::vector<QMatrix>{s.x.map(h), s.x.map(h)}));
  Representation sum(dq, {2, 2, 2}, maps);
  std::vector<QMatrix> g = random_group_element(rng, sum.dims());
  Representation y = act(g, sum);
  Subspace f;
  for (std::size_t i = 0; i < 3; ++i) f.basis.push_back(g[i] * qm({{"1"}, {"0"}}));
  ThetaVector zero(3, Rational(0));
  Representation gr = associated_graded(y, {f}, zero);
  EXPECT_TRUE(solves_relation(gr, s.q));
}
