#include <random>

#include <gtest/gtest.h>

#include "mqv/intertwiner.hpp"
#include "mqv/linalg.hpp"
#include "test_util.hpp"

using namespace mqv;
using mqv::testing::q;
using mqv::testing::qm;
using mqv::testing::random_qmatrix;

TEST(Scalar, ParseAndPrintRoundTrip) {
  EXPECT_EQ(q("3/4").to_string(), "3/4+0/1*i");
  EXPECT_EQ(q("1/2-2/3*i").to_string(), "1/2-2/3*i");
  EXPECT_EQ(q("-i"), GaussRational(Rational(0), Rational(-1)));
  EXPECT_EQ(q("2/4+6/8*i").to_string(), "1/2+3/4*i");
  EXPECT_EQ(q("-5"), GaussRational(-5L));
  for (const char* s : {"7/3+1/5*i", "-1/2-1/2*i", "0/1+0/1*i", "-9/7+4/1*i"}) {
    EXPECT_EQ(GaussRational::parse(s).to_string(), s);
  }
  EXPECT_THROW(GaussRational::parse("1/0"), ContractViolation);
  EXPECT_THROW(GaussRational::parse("abc"), ContractViolation);
}

TEST(Scalar, FieldArithmetic) {
  GaussRational a = q("1/2+1/3*i"), b = q("-2+5/7*i");
  EXPECT_EQ((a * b) / b, a);
  EXPECT_EQ(a * a.inverse(), GaussRational(1L));
  EXPECT_EQ(a.pow(-3) * a.pow(3), GaussRational(1L));
  EXPECT_EQ(GaussRational::imag_unit().pow(2), GaussRational(-1L));
  EXPECT_THROW(GaussRational().inverse(), ContractViolation);
}

TEST(KernelBasis, IdentityHasEmptyKernel) {
  QMatrix k = kernel_basis(QMatrix::identity(2));
  EXPECT_EQ(k.rows(), 2u);
  EXPECT_EQ(k.cols(), 0u);
}

TEST(KernelBasis, SumOfCoordinates) {
  QMatrix m = qm({{"1", "1"}});
  QMatrix k = kernel_basis(m);
  ASSERT_EQ(k.cols(), 1u);
  EXPECT_TRUE((m * k).is_zero());
  EXPECT_EQ(k(0, 0), -k(1, 0));
  EXPECT_FALSE(k(0, 0).is_zero());
}

TEST(KernelBasis, ZeroMapKernelIsEverything) {
  QMatrix k = kernel_basis(QMatrix(2, 2));
  EXPECT_EQ(k.cols(), 2u);
  EXPECT_EQ(rank(k), 2u);
}

TEST(KernelBasis, FloatInputIsModeError) { EXPECT_THROW(kernel_basis(CMatrix::identity(2)), ModeError); }

TEST(KernelBasis, RankNullityOnRandomMatrices) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t r = 1 + rng() % 5, c = 1 + rng() % 6, inner = 1 + rng() % 4;
    QMatrix m = random_qmatrix(rng, r, inner) * random_qmatrix(rng, inner, c);
    QMatrix k = kernel_basis(m);
    EXPECT_EQ(k.cols() + rank(m), c);
    EXPECT_TRUE((m * k).is_zero());
    EXPECT_EQ(rank(k), k.cols());
  }
}

TEST(Linalg, EmptyShapes) {
  QMatrix z(0, 3);
  EXPECT_EQ(rank(z), 0u);
  EXPECT_EQ(kernel_basis(z).cols(), 3u);
  EXPECT_EQ(kernel_basis(QMatrix(3, 0)).cols(), 0u);
  EXPECT_EQ(det(QMatrix(0, 0)), GaussRational(1L));
  EXPECT_EQ(inverse(QMatrix(0, 0)).rows(), 0u);
}

TEST(Linalg, DeterminantMatchesCofactorExpansion) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    QMatrix m = random_qmatrix(rng, 3, 3);
    GaussRational cof = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                        m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                        m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    EXPECT_EQ(det(m), cof);
    if (!cof.is_zero()) EXPECT_TRUE((m * inverse(m)).is_identity());
  }
}

TEST(Linalg, SolveAndInconsistency) {
  QMatrix a = qm({{"1", "2"}, {"2", "4"}});
  auto x = solve(a, qm({{"3"}, {"6"}}));
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ(a * *x, qm({{"3"}, {"6"}}));
  EXPECT_FALSE(solve(a, qm({{"3"}, {"7"}})).has_value());
}

TEST(Linalg, SubspaceOperations) {
  QMatrix s = qm({{"1", "0"}, {"0", "1"}, {"0", "0"}});
  QMatrix t = qm({{"0", "0"}, {"1", "0"}, {"0", "1"}});
  QMatrix meet = intersect(s, t);
  ASSERT_EQ(meet.cols(), 1u);
  EXPECT_EQ(canonical_basis(meet), qm({{"0"}, {"1"}, {"0"}}));
  EXPECT_EQ(span_sum(s, t).cols(), 3u);
  // preimage of the line e1 under the swap of e1 and e2
  QMatrix swap = qm({{"0", "1", "0"}, {"1", "0", "0"}, {"0", "0", "1"}});
  EXPECT_EQ(canonical_basis(preimage(swap, qm({{"1"}, {"0"}, {"0"}}))), qm({{"0"}, {"1"}, {"0"}}));
  EXPECT_EQ(complete_basis(meet).cols(), 3u);
  EXPECT_EQ(rank(complete_basis(meet)), 3u);
}

TEST(RankNumeric, Examples) {
  EXPECT_EQ(rank_numeric(CMatrix::identity(3), 1e-9), 3u);
  CMatrix d(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 1e-14;
  EXPECT_EQ(rank_numeric(d, 1e-9), 1u);
  EXPECT_EQ(rank_numeric(CMatrix(3, 3), 1e-9), 0u);
  EXPECT_EQ(rank_numeric(CMatrix(0, 4), 1e-9), 0u);
  EXPECT_THROW(rank_numeric(QMatrix::identity(2)), ModeError);
}

TEST(RankNumeric, ProductOfGenericFactors) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    CMatrix a(5, 3), b(3, 7);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 3; ++j) a(i, j) = Complex(g(rng), g(rng));
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 7; ++j) b(i, j) = Complex(g(rng), g(rng));
    EXPECT_EQ(rank_numeric(a * b, 1e-9), 3u);
  }
}

TEST(Intertwiner, ConjugationIsRecovered) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    QMatrix x = random_qmatrix(rng, 3, 3);
    QMatrix g = random_qmatrix(rng, 3, 3);
    if (det(g).is_zero()) continue;
    QMatrix y = g * x * inverse(g);
    // xi x = y xi
    std::vector<LinearConstraint> cs{{{{0, QMatrix::identity(3), x}, {0, -y, QMatrix::identity(3)}}, QMatrix(3, 3)}};
    EXPECT_TRUE(satisfies({g}, cs));
    auto xi = solve_sylvester_intertwiner({{3, 3}}, cs, true, rng);
    ASSERT_TRUE(xi.has_value());
    EXPECT_TRUE(satisfies(*xi, cs));
    EXPECT_FALSE(det((*xi)[0]).is_zero());
  }
}

TEST(Intertwiner, RankObstruction) {
  // xi: C^1 -> C^2 with xi * 1 = identity on C^2 is impossible.
  std::mt19937_64 rng(1);
  std::vector<LinearConstraint> cs{{{{0, QMatrix::identity(2), QMatrix::identity(1)}}, QMatrix::identity(2).block(0, 0, 2, 1)}};
  // consistent: xi = e1
  EXPECT_TRUE(solve_sylvester_intertwiner({{2, 1}}, cs, false, rng).has_value());
  std::vector<LinearConstraint> bad{{{{0, QMatrix::identity(2), QMatrix::identity(1) * GaussRational(0L)}}, QMatrix::identity(2).block(0, 0, 2, 1)}};
  EXPECT_FALSE(solve_sylvester_intertwiner({{2, 1}}, bad, false, rng).has_value());
  EXPECT_THROW(solve_matrix_system({{2, 2}}, {{{{0, QMatrix::identity(3), QMatrix::identity(2)}}, QMatrix(3, 2)}}),
               ContractViolation);
}
