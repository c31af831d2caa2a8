#include "mqv/star_bridge.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "mqv/linalg.hpp"

namespace mqv {

namespace {

std::string arm_label(int arm, int j) { return "(" + std::to_string(arm) + "," + std::to_string(j) + ")"; }

void check_ladders(const std::vector<std::vector<GaussRational>>& ladders, const StarQuiver& sq) {
  if (static_cast<int>(ladders.size()) != sq.arms()) throw ContractViolation("one ladder per arm is required");
  for (int i = 0; i < sq.arms(); ++i) {
    const auto& l = ladders[i];
    if (static_cast<int>(l.size()) != sq.arm_lengths[i] + 1) {
      throw ContractViolation("ladder of arm " + std::to_string(i + 1) + " needs " +
                              std::to_string(sq.arm_lengths[i] + 1) + " entries");
    }
    for (const auto& xi : l) {
      if (xi.is_zero()) throw ContractViolation("ladder entries must be nonzero (arm " + std::to_string(i + 1) + ")");
    }
  }
}

QMatrix product(const std::vector<QMatrix>& ms, std::size_t r) {
  QMatrix p = QMatrix::identity(r);
  for (const auto& m : ms) p = p * m;
  return p;
}

}  // namespace

std::vector<int> LocalSystemData::arm_lengths() const {
  std::vector<int> out;
  for (const auto& l : ladders) out.push_back(static_cast<int>(l.size()) - 1);
  return out;
}

bool LocalSystemData::product_is_one() const { return product(matrices, static_cast<std::size_t>(r)).is_identity(); }

DimVector star_dims(const StarQuiver& sq, long r, const std::vector<std::vector<long>>& v) {
  DimVector d(sq.dq.num_vertices(), 0);
  d[sq.center()] = r;
  if (static_cast<int>(v.size()) != sq.arms()) throw ContractViolation("one flag-dimension list per arm is required");
  for (int i = 0; i < sq.arms(); ++i) {
    if (static_cast<int>(v[i].size()) != sq.arm_lengths[i]) throw ContractViolation("flag-dimension list has wrong length");
    for (int j = 1; j <= sq.arm_lengths[i]; ++j) d[sq.vertex(i + 1, j)] = v[i][j - 1];
  }
  return d;
}

QVector star_q(const StarQuiver& sq, const std::vector<std::vector<GaussRational>>& ladders) {
  check_ladders(ladders, sq);
  QVector q(sq.dq.num_vertices(), GaussRational(1L));
  GaussRational q0(1L);
  for (int i = 0; i < sq.arms(); ++i) {
    q0 = q0 * ladders[i][0].inverse();
    for (int j = 1; j <= sq.arm_lengths[i]; ++j) q[sq.vertex(i + 1, j)] = ladders[i][j - 1] / ladders[i][j];
  }
  q[sq.center()] = q0;
  return q;
}

std::pair<QVector, ThetaVector> params_from_weights(const StarQuiver& sq,
                                                    const std::vector<std::vector<GaussRational>>& ladders,
                                                    const std::vector<std::vector<Rational>>& beta,
                                                    const DimVector& dims) {
  QVector q = star_q(sq, ladders);
  if (dims.size() != sq.dq.num_vertices()) throw ContractViolation("dimension vector has wrong length");
  const long r = dims[sq.center()];
  if (r <= 0) throw ContractViolation("the center dimension r must be positive");
  if (static_cast<int>(beta.size()) != sq.arms()) throw ContractViolation("one weight list per arm is required");
  ThetaVector theta(sq.dq.num_vertices(), Rational(0));
  Rational weighted(0);
  for (int i = 0; i < sq.arms(); ++i) {
    const auto& b = beta[i];
    if (static_cast<int>(b.size()) != sq.arm_lengths[i] + 1) {
      throw ContractViolation("weights of arm " + std::to_string(i + 1) + " need " +
                              std::to_string(sq.arm_lengths[i] + 1) + " entries");
    }
    for (int j = 1; j <= sq.arm_lengths[i]; ++j) {
      Rational t = b[j] - b[j - 1];
      if (sgn(t) <= 0) throw ContractViolation("weights must be strictly increasing along arm " + std::to_string(i + 1));
      const std::size_t v = sq.vertex(i + 1, j);
      theta[v] = t;
      weighted += t * dims[v];
    }
  }
  theta[sq.center()] = -weighted / r;
  if (sgn(theta_dot(theta, dims)) != 0) throw ContractViolation("theta.dims != 0");
  if (!q_power(q, dims).is_one()) {
    throw ContractViolation("q^dims = " + q_power(q, dims).to_string() +
                            " != 1: the ladders are incompatible with these flag dimensions");
  }
  return {q, theta};
}

RepToTupleResult rep_to_tuple(const StarQuiver& sq, const Representation& x,
                              const std::vector<std::vector<GaussRational>>& ladders, bool assume_stable) {
  const QVector q = star_q(sq, ladders);
  {
    RelationReport<GaussRational> rep;
    try {
      rep = check_relation(x, q);
    } catch (const DomainError& e) {
      throw ContractViolation(std::string("star representation is outside the domain: ") + e.what());
    }
    if (!rep.exact_zero) throw ContractViolation("star representation does not solve Phi = q for these ladders");
  }
  RepToTupleResult res;
  const std::size_t c = sq.center();
  const long r = x.dim(c);
  res.data.r = r;
  res.data.ladders = ladders;
  std::vector<std::vector<QMatrix>> flags(sq.arms());
  for (int i = 0; i < sq.arms(); ++i) {
    const int arm = i + 1;
    const int l = sq.arm_lengths[i];
    const auto& xi = ladders[i];
    QMatrix a = QMatrix::identity(r);
    if (l > 0) a = a + x.map(sq.a(arm, 0)) * x.map(sq.b(arm, 0));
    res.data.matrices.push_back(a * xi[0]);
    const QMatrix& ai = res.data.matrices.back();

    QMatrix chain = QMatrix::identity(r);
    std::vector<QMatrix> bases{QMatrix::identity(r)};
    for (int j = 1; j <= l; ++j) {
      const QMatrix& aj = x.map(sq.a(arm, j - 1));
      if (rank(aj) != aj.cols()) {
        res.a_injective = false;
        res.detail += "a" + arm_label(arm, j - 1) + " not injective; ";
        if (assume_stable) {
          throw StabilityViolation("a" + arm_label(arm, j - 1) + " is not injective at a point declared stable");
        }
      }
      chain = chain * aj;
      bases.push_back(column_basis(chain));
      if (bases.back().cols() != static_cast<std::size_t>(x.dim(sq.vertex(arm, j)))) {
        res.flag_dims = false;
        res.detail += "dim F" + arm_label(arm, j) + " != v; ";
      }
    }
    bases.push_back(QMatrix(r, 0));
    for (int j = 0; j <= l; ++j) {
      QMatrix img = (ai - QMatrix::scalar(r, xi[j])) * bases[j];
      if (!contains(bases[j + 1], img)) {
        res.containments = false;
        res.detail += "(A - xi)F" + arm_label(arm, j) + " not inside the next step; ";
      }
    }
    flags[i].assign(bases.begin() + 1, bases.begin() + 1 + l);
  }
  res.data.flags = std::move(flags);
  return res;
}

std::pair<StarQuiver, Representation> tuple_to_rep(const LocalSystemData& d) {
  if (!d.flags) throw ContractViolation("tuple_to_rep needs explicit flag bases");
  if (d.ladders.size() != d.n() || d.flags->size() != d.n()) throw ContractViolation("one ladder and flag per matrix");
  const std::size_t r = static_cast<std::size_t>(d.r);
  for (const auto& a : d.matrices) {
    if (a.rows() != r || a.cols() != r) throw ContractViolation("monodromy matrices must be r x r");
  }
  if (!d.product_is_one()) throw ContractViolation("A_1 ... A_n != 1");
  StarQuiver sq = build_star(d.arm_lengths());
  check_ladders(d.ladders, sq);

  std::vector<std::vector<QMatrix>> bases(d.n());
  std::vector<std::vector<long>> v(d.n());
  for (std::size_t i = 0; i < d.n(); ++i) {
    const int arm = static_cast<int>(i) + 1;
    const auto& f = (*d.flags)[i];
    const int l = sq.arm_lengths[i];
    if (static_cast<int>(f.size()) != l) throw ContractViolation("arm " + std::to_string(arm) + " needs " + std::to_string(l) + " flag steps");
    bases[i].push_back(QMatrix::identity(r));
    for (int j = 1; j <= l; ++j) {
      const QMatrix& bj = f[j - 1];
      if (bj.rows() != r) throw ContractViolation("flag basis" + arm_label(arm, j) + " has wrong ambient dimension");
      if (rank(bj) != bj.cols()) throw ContractViolation("flag basis" + arm_label(arm, j) + " is not independent");
      if (!contains(bases[i].back(), bj)) throw ContractViolation("flag" + arm_label(arm, j) + " is not descending");
      bases[i].push_back(bj);
      v[i].push_back(static_cast<long>(bj.cols()));
    }
    bases[i].push_back(QMatrix(r, 0));
    for (int j = 0; j <= l; ++j) {
      QMatrix img = (d.matrices[i] - QMatrix::scalar(r, d.ladders[i][j])) * bases[i][j];
      if (!contains(bases[i][j + 1], img)) {
        throw ContractViolation("flag" + arm_label(arm, j) + " is not stable: (A - xi_j) F^j is not inside F^{j+1}");
      }
    }
  }

  Representation x(sq.dq, star_dims(sq, d.r, v));
  for (std::size_t i = 0; i < d.n(); ++i) {
    const int arm = static_cast<int>(i) + 1;
    for (int j = 0; j < sq.arm_lengths[i]; ++j) {
      const QMatrix& bj = bases[i][j];
      const QMatrix& bn = bases[i][j + 1];
      x.set_map(sq.a(arm, j), coordinates(bj, bn));
      QMatrix m = (d.matrices[i] * d.ladders[i][j].inverse() - QMatrix::identity(r)) * bj;
      x.set_map(sq.b(arm, j), coordinates(bn, m));
    }
  }
  return {sq, x};
}

std::vector<QMatrix> image_ladder_flags(const QMatrix& a, const std::vector<GaussRational>& ladder) {
  std::vector<QMatrix> out;
  QMatrix p = QMatrix::identity(a.rows());
  for (std::size_t j = 1; j < ladder.size(); ++j) {
    p = p * (a - QMatrix::scalar(a.rows(), ladder[j - 1]));
    out.push_back(canonical_basis(p));
  }
  return out;
}

BetaStabilityReport beta_stability_report(const LocalSystemData& d, const std::vector<QMatrix>& seeds) {
  const std::size_t r = static_cast<std::size_t>(d.r);
  std::vector<std::vector<QMatrix>> flags;
  if (d.flags) {
    flags = *d.flags;
  } else {
    for (std::size_t i = 0; i < d.n(); ++i) flags.push_back(image_ladder_flags(d.matrices[i], d.ladders[i]));
  }
  if (d.beta.size() != d.n()) throw ContractViolation("beta_stability_report needs one weight list per arm");

  std::vector<QMatrix> s = seeds;
  if (s.empty()) {
    for (std::size_t k = 0; k < r; ++k) {
      QMatrix e(r, 1);
      e(k, 0) = GaussRational(1L);
      s.push_back(e);
    }
    for (std::size_t i = 0; i < d.n(); ++i) {
      for (const auto& xi : d.ladders[i]) {
        QMatrix k = kernel_basis(d.matrices[i] - QMatrix::scalar(r, xi));
        for (std::size_t c = 0; c < k.cols(); ++c) s.push_back(k.column(c));
      }
    }
  }

  BetaStabilityReport rep;
  std::set<std::string> seen;
  for (const auto& seed : s) {
    if (seed.rows() != r) throw ContractViolation("seed has wrong ambient dimension");
    QMatrix m = column_basis(seed);
    while (true) {
      QMatrix next = m;
      for (const auto& a : d.matrices) next = span_sum(next, a * m);
      next = column_basis(next);
      if (next.cols() == m.cols()) break;
      m = next;
    }
    if (m.cols() == 0 || m.cols() == r) continue;
    m = canonical_basis(m);
    std::string key;
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) key += m(i, j).to_string() + ";";
    if (!seen.insert(key).second) continue;

    BetaCandidate c;
    c.basis = m;
    Rational lhs(0), rhs(0);
    for (std::size_t i = 0; i < d.n(); ++i) {
      for (std::size_t j = 1; j < d.beta[i].size() && j <= flags[i].size(); ++j) {
        Rational t = d.beta[i][j] - d.beta[i][j - 1];
        lhs += t * Rational(static_cast<long>(intersect(m, flags[i][j - 1]).cols()));
        rhs += t * Rational(static_cast<long>(flags[i][j - 1].cols()));
      }
    }
    c.lhs = lhs / Rational(static_cast<long>(m.cols()));
    c.rhs = rhs / Rational(static_cast<long>(r));
    c.violates_semistability = c.lhs > c.rhs;
    c.violates_stability = c.lhs >= c.rhs;
    rep.semistability_disproved = rep.semistability_disproved || c.violates_semistability;
    rep.stability_disproved = rep.stability_disproved || c.violates_stability;
    rep.candidates.push_back(std::move(c));
  }
  return rep;
}

std::map<std::string, GaussRational> trace_coordinates(const Representation& x,
                                                       const std::vector<std::vector<std::string>>& cycles) {
  const auto& dq = x.quiver();
  std::map<std::string, GaussRational> out;
  for (const auto& word : cycles) {
    if (word.empty()) throw ContractViolation("empty cycle word");
    std::vector<std::size_t> hs;
    for (const auto& id : word) hs.push_back(dq.find(id));
    std::string key;
    for (std::size_t k = 0; k < hs.size(); ++k) {
      const auto& cur = dq.arrow(hs[k]);
      const auto& nxt = dq.arrow(hs[(k + 1) % hs.size()]);
      if (cur.out != nxt.in) throw ContractViolation("word is not a cycle at '" + cur.id + "'");
      key += (k ? "," : "") + word[k];
    }
    QMatrix m = x.map(hs[0]);
    for (std::size_t k = 1; k < hs.size(); ++k) m = m * x.map(hs[k]);
    GaussRational t(0L);
    for (std::size_t k = 0; k < m.rows(); ++k) t = t + m(k, k);
    out[key] = t;
  }
  return out;
}

std::vector<std::vector<std::string>> enumerate_cycles(const DoubledQuiver& dq, std::size_t max_len) {
  std::vector<std::vector<std::string>> out;
  std::set<std::vector<std::size_t>> seen;
  std::vector<std::size_t> path;
  // Words x_{h_1} ... x_{h_k}: h_{m+1} must end where h_m starts.
  std::function<void()> extend = [&]() {
    const auto& last = dq.arrow(path.back());
    if (last.out == dq.arrow(path.front()).in) {
      std::vector<std::size_t> best = path;
      for (std::size_t s = 1; s < path.size(); ++s) {
        std::vector<std::size_t> rot(path.begin() + s, path.end());
        rot.insert(rot.end(), path.begin(), path.begin() + s);
        best = std::min(best, rot);
      }
      if (seen.insert(best).second) {
        std::vector<std::string> ids;
        for (std::size_t h : best) ids.push_back(dq.arrow(h).id);
        out.push_back(std::move(ids));
      }
    }
    if (path.size() == max_len) return;
    for (std::size_t h : dq.incoming(last.out)) {
      path.push_back(h);
      extend();
      path.pop_back();
    }
  };
  for (std::size_t h = 0; h < dq.num_arrows(); ++h) {
    path = {h};
    extend();
  }
  return out;
}

}  // namespace mqv
