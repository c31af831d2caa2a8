#include <random>

#include <gtest/gtest.h>

#include "mqv/errors.hpp"
#include "mqv/generators.hpp"
#include "mqv/roots.hpp"
#include "test_util.hpp"

using namespace mqv;
using mqv::testing::q;

namespace {

DoubledQuiver a2() { return DoubledQuiver(named_quiver("A2")); }
DoubledQuiver jordan() { return DoubledQuiver(named_quiver("jordan")); }

ThetaVector th(std::initializer_list<long> v) {
  ThetaVector t;
  for (long e : v) t.emplace_back(e);
  return t;
}

}  // namespace

TEST(DoubledQuiver, A2Double) {
  DoubledQuiver dq = a2();
  ASSERT_EQ(dq.num_arrows(), 2u);
  const auto& h = dq.arrow(dq.find("a1"));
  const auto& hb = dq.arrow(dq.find("~a1"));
  EXPECT_EQ(h.eps, 1);
  EXPECT_EQ(hb.eps, -1);
  EXPECT_EQ(h.out, hb.in);
  EXPECT_EQ(h.in, hb.out);
  EXPECT_EQ(dq.arrow(h.partner).id, "~a1");
  EXPECT_EQ(dq.arrow(hb.partner).id, "a1");
  EXPECT_TRUE(dq.canonical_order());
  EXPECT_EQ(dq.incoming(1), std::vector<std::size_t>{dq.find("a1")});
}

TEST(DoubledQuiver, JordanHasTwoOppositeLoops) {
  DoubledQuiver dq = jordan();
  ASSERT_EQ(dq.num_arrows(), 2u);
  EXPECT_TRUE(dq.has_loop_at(0));
  EXPECT_EQ(dq.arrow(0).eps + dq.arrow(1).eps, 0);
  for (const auto& a : dq.arrows()) EXPECT_EQ(a.out, a.in);
}

TEST(DoubledQuiver, EmptyArrowSet) {
  DoubledQuiver dq(Quiver({"v"}, {}));
  EXPECT_EQ(dq.num_arrows(), 0u);
  EXPECT_TRUE(dq.incoming(0).empty());
}

TEST(DoubledQuiver, InvolutionAndSigns) {
  for (const char* name : {"A4", "D5", "E6", "affine-A3", "affine-D4", "jordan"}) {
    DoubledQuiver dq(named_quiver(name));
    EXPECT_EQ(dq.num_arrows(), 2 * dq.base().arrows().size()) << name;
    for (std::size_t h = 0; h < dq.num_arrows(); ++h) {
      const auto& a = dq.arrow(h);
      EXPECT_NE(a.partner, h);
      EXPECT_EQ(dq.arrow(a.partner).partner, h);
      EXPECT_EQ(a.eps, -dq.arrow(a.partner).eps);
      EXPECT_EQ(dq.arrow(a.partner).out, a.in);
    }
  }
}

TEST(DoubledQuiver, ExplicitOrder) {
  Quiver base = named_quiver("A3");
  DoubledQuiver dq(base, std::vector<std::string>{"~a2", "~a1", "a1", "a2"});
  EXPECT_FALSE(dq.canonical_order());
  EXPECT_FALSE(dq.omega_first_at(1));
  EXPECT_TRUE(dq.less(dq.find("~a2"), dq.find("a1")));
  EXPECT_THROW(DoubledQuiver(base, std::vector<std::string>{"a1", "a2", "~a1"}), ContractViolation);
  EXPECT_THROW(DoubledQuiver(base, std::vector<std::string>{"a1", "a1", "~a1", "~a2"}), ContractViolation);
  EXPECT_THROW(DoubledQuiver(base, std::vector<std::string>{"a1", "a2", "~a1", "b"}), ContractViolation);
}

TEST(DoubledQuiver, ReorientedKeepsPositions) {
  DoubledQuiver dq = a2();
  DoubledQuiver r = dq.reoriented(dq.find("a1"));
  EXPECT_EQ(r.arrow(r.find("a1")).eps, -1);
  EXPECT_EQ(r.order_ids(), dq.order_ids());
  EXPECT_EQ(r.reoriented(r.find("a1")).arrow(r.find("a1")).eps, 1);
}

TEST(Quiver, Validation) {
  EXPECT_THROW(Quiver({"1", "1"}, {}), ContractViolation);
  EXPECT_THROW(Quiver({"1"}, {{"a", "1", "2"}}), ContractViolation);
  EXPECT_THROW(Quiver({"1"}, {{"~a", "1", "1"}}), ContractViolation);
  EXPECT_THROW(Quiver({"1", "2"}, {{"a", "1", "2"}, {"a", "2", "1"}}), ContractViolation);
}

TEST(StarQuiver, Shapes) {
  StarQuiver d4 = build_star({1, 1, 1});
  EXPECT_EQ(d4.dq.num_vertices(), 4u);
  EXPECT_EQ(d4.dq.base().arrows().size(), 3u);
  StarQuiver s1 = build_star({1});
  EXPECT_EQ(s1.dq.num_vertices(), 2u);
  EXPECT_EQ(s1.dq.base().arrows().size(), 1u);
  StarQuiver s22 = build_star({2, 2});
  EXPECT_EQ(s22.dq.num_vertices(), 5u);
  // a_{i,j}: [i,j+1] -> [i,j]
  const auto& a = s22.dq.arrow(s22.a(2, 1));
  EXPECT_EQ(a.out, s22.vertex(2, 2));
  EXPECT_EQ(a.in, s22.vertex(2, 1));
  EXPECT_EQ(s22.dq.arrow(s22.a(1, 0)).in, s22.center());
  EXPECT_EQ(s22.dq.arrow(s22.b(1, 0)).out, s22.center());
  EXPECT_THROW(build_star({}), ContractViolation);
  EXPECT_THROW(build_star({1, -1}), ContractViolation);
}

TEST(StarQuiver, VertexCountIsOnePlusArmSum) {
  for (const auto& arms : std::vector<std::vector<int>>{{3}, {1, 2, 3}, {0, 2}, {1, 1, 1, 1}}) {
    StarQuiver s = build_star(arms);
    std::size_t n = 1;
    for (int l : arms) n += static_cast<std::size_t>(l);
    EXPECT_EQ(s.dq.num_vertices(), n);
    EXPECT_EQ(s.dq.base().arrows().size(), n - 1);
  }
}

TEST(BilinearForm, Examples) {
  DoubledQuiver dq = a2();
  EXPECT_EQ(bilinear_form(dq, {1, 0}, {1, 0}), 2);
  EXPECT_EQ(bilinear_form(dq, {1, 0}, {0, 1}), -1);
  EXPECT_EQ(bilinear_form(dq, {1, 1}, {1, 1}), 2);
  EXPECT_EQ(bilinear_form(jordan(), {1}, {1}), 0);
  EXPECT_THROW(bilinear_form(dq, {1}, {1, 0}), ContractViolation);
}

TEST(BilinearForm, SymmetricOnRandomVectors) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<long> d(-3, 3);
  for (const char* name : {"A3", "D4", "affine-A2", "jordan", "star:2,1"}) {
    DoubledQuiver dq(named_quiver(name));
    for (int k = 0; k < 10; ++k) {
      DimVector a(dq.num_vertices()), b(dq.num_vertices());
      for (auto& e : a) e = d(rng);
      for (auto& e : b) e = d(rng);
      EXPECT_EQ(bilinear_form(dq, a, b), bilinear_form(dq, b, a)) << name;
    }
  }
}

TEST(Reflections, Examples) {
  DoubledQuiver dq = a2();
  EXPECT_EQ(reflect_dim(dq, 0, {1, 1}), (DimVector{0, 1}));
  EXPECT_EQ(reflect_dim(dq, 0, {0, 1}), (DimVector{1, 1}));
  EXPECT_EQ(reflect_dim(dq, 0, {1, 0}), (DimVector{-1, 0}));
  EXPECT_EQ(reflect_theta(dq, 0, th({1, -1})), th({-1, 0}));
  EXPECT_EQ(reflect_q(dq, 0, {q("4"), q("1/4")}), (QVector{q("1/4"), q("1")}));
  EXPECT_EQ(reflect_q(dq, 1, {q("1/2"), q("2")}), (QVector{q("1"), q("1/2")}));
  EXPECT_THROW(reflect_dim(jordan(), 0, {1}), LoopError);
  EXPECT_THROW(reflect_q(jordan(), 0, {q("2")}), LoopError);
}

TEST(Reflections, PropertiesOnRandomDraws) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<long> d(0, 3), t(-4, 4);
  for (const char* name : {"A3", "D4", "affine-D4", "star:2,2"}) {
    DoubledQuiver dq(named_quiver(name));
    const std::size_t n = dq.num_vertices();
    for (int k = 0; k < 10; ++k) {
      DimVector a(n), b(n);
      ThetaVector theta(n);
      QVector qv(n);
      for (std::size_t j = 0; j < n; ++j) {
        a[j] = d(rng);
        b[j] = d(rng);
        theta[j] = Rational(t(rng));
        qv[j] = random_small_rational(rng);
      }
      const std::size_t i = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
      DimVector sa = reflect_dim(dq, i, a);
      EXPECT_EQ(reflect_dim(dq, i, sa), a);
      EXPECT_EQ(reflect_theta(dq, i, reflect_theta(dq, i, theta)), theta);
      EXPECT_EQ(reflect_q(dq, i, reflect_q(dq, i, qv)), qv);
      EXPECT_EQ(bilinear_form(dq, sa, reflect_dim(dq, i, b)), bilinear_form(dq, a, b));
      // Dualities: r_i(theta).s_i(a) = theta.a and u_i(q)^{s_i(a)} = q^a.
      EXPECT_EQ(theta_dot(reflect_theta(dq, i, theta), sa), theta_dot(theta, a));
      EXPECT_EQ(q_power(reflect_q(dq, i, qv), sa), q_power(qv, a));
    }
  }
}

TEST(PositiveRoots, Examples) {
  EXPECT_EQ(enumerate_Rplus_bounded(a2(), {1, 1}), (std::vector<DimVector>{{0, 1}, {1, 0}, {1, 1}}));
  DoubledQuiver point(Quiver({"v"}, {}));
  EXPECT_EQ(enumerate_Rplus_bounded(point, {3}), (std::vector<DimVector>{{1}}));
  EXPECT_EQ(enumerate_Rplus_bounded(jordan(), {2}), (std::vector<DimVector>{{1}, {2}}));
}

TEST(PositiveRoots, BoundedByVAndForm) {
  DoubledQuiver dq(named_quiver("affine-D4"));
  DimVector v{2, 1, 1, 1, 1};
  auto roots = enumerate_Rplus_bounded(dq, v);
  EXPECT_NE(std::find(roots.begin(), roots.end(), v), roots.end());
  for (const auto& a : roots) {
    EXPECT_LE(bilinear_form(dq, a, a), 2);
    EXPECT_GT(total(a), 0);
    for (std::size_t j = 0; j < v.size(); ++j) EXPECT_LE(a[j], v[j]);
  }
  // A3 has 6 positive roots, all at most (1,1,1).
  EXPECT_EQ(enumerate_Rplus_bounded(DoubledQuiver(named_quiver("A3")), {1, 1, 1}).size(), 6u);
}

TEST(Genericity, Examples) {
  DoubledQuiver dq = a2();
  EXPECT_TRUE(is_generic(dq, {1, 1}, {q("2"), q("1/2")}, th({1, -1})).generic);
  GenericityReport wall = is_generic(dq, {1, 1}, {q("1"), q("1")}, th({0, 0}));
  EXPECT_FALSE(wall.generic);
  EXPECT_EQ(wall.failure, "wall");
  ASSERT_TRUE(wall.witness);
  GenericityReport bad = is_generic(dq, {1, 1}, {q("2"), q("1/3")}, th({1, -1}));
  EXPECT_FALSE(bad.generic);
  EXPECT_EQ(bad.failure, "q^v != 1");
  EXPECT_EQ(is_generic(dq, {1, 1}, {q("2"), q("1/2")}, th({1, 1})).failure, "theta.v != 0");
}

TEST(RootDatum, CartanMatrices) {
  RootDatum a = root_datum_from_graph(a2());
  EXPECT_EQ(a.cartan, (std::vector<std::vector<long>>{{2, -1}, {-1, 2}}));
  Quiver kron({"1", "2"}, {{"a", "1", "2"}, {"b", "1", "2"}});
  EXPECT_EQ(root_datum_from_graph(DoubledQuiver(kron)).cartan, (std::vector<std::vector<long>>{{2, -2}, {-2, 2}}));
  EXPECT_EQ(root_datum_from_graph(DoubledQuiver(Quiver({"v"}, {}))).cartan, (std::vector<std::vector<long>>{{2}}));
  EXPECT_THROW(root_datum_from_graph(jordan()), ContractViolation);
}

TEST(RootDatum, PairingsAndForm) {
  for (const char* name : {"A3", "D4", "affine-A2", "affine-D4", "E6"}) {
    DoubledQuiver dq(named_quiver(name));
    RootDatum r = root_datum_from_graph(dq);
    const std::size_t n = r.rank();
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_EQ(r.cartan[i][i], 2);
      for (std::size_t j = 0; j < n; ++j) {
        EXPECT_EQ(r.pair(i, r.fundamental_weights[j]), i == j ? 1 : 0) << name;
        EXPECT_EQ(r.pair(i, r.simple_roots[j]), r.cartan[i][j]) << name;
        EXPECT_EQ(r.cartan[i][j] == 0, r.cartan[j][i] == 0);
        if (i != j) EXPECT_LE(r.cartan[i][j], 0);
        EXPECT_EQ(r.form(r.simple_roots[i], r.simple_roots[j]),
                  bilinear_form(dq, unit_vector(n, i), unit_vector(n, j)));
      }
    }
    // <h_i, w - v> = w_i - sum_j c_ij v_j on the weight sum w Lambda - v alpha.
    DimVector w(n, 1), v(n, 0);
    v[0] = 2;
    auto lam = r.weight(w, v);
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(r.pair(i, lam), 1 - 2 * r.cartan[i][0]);
  }
}
