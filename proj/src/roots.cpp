#include "mqv/roots.hpp"

#include <algorithm>
#include <numeric>

#include "mqv/errors.hpp"

namespace mqv {

namespace {

void check_size(const DoubledQuiver& dq, std::size_t n, const char* what) {
  if (n != dq.num_vertices()) {
    throw ContractViolation(std::string(what) + " has " + std::to_string(n) + " entries, quiver has " +
                            std::to_string(dq.num_vertices()) + " vertices");
  }
}

void check_loop_free(const DoubledQuiver& dq, std::size_t i) {
  if (i >= dq.num_vertices()) throw ContractViolation("vertex index out of range");
  if (dq.has_loop_at(i)) throw LoopError("reflection at vertex '" + dq.vertex_name(i) + "' which carries a loop");
}

}  // namespace

DimVector unit_vector(std::size_t n, std::size_t i) {
  DimVector e(n, 0);
  e.at(i) = 1;
  return e;
}

long total(const DimVector& v) { return std::accumulate(v.begin(), v.end(), 0L); }

long bilinear_form(const DoubledQuiver& dq, const DimVector& a, const DimVector& b) {
  check_size(dq, a.size(), "first dimension vector");
  check_size(dq, b.size(), "second dimension vector");
  long s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += 2 * a[i] * b[i];
  for (const auto& h : dq.arrows()) s -= a[h.out] * b[h.in];
  return s;
}

DimVector reflect_dim(const DoubledQuiver& dq, std::size_t i, const DimVector& a) {
  check_loop_free(dq, i);
  DimVector out = a;
  out[i] -= bilinear_form(dq, a, unit_vector(a.size(), i));
  return out;
}

ThetaVector reflect_theta(const DoubledQuiver& dq, std::size_t i, const ThetaVector& theta) {
  check_loop_free(dq, i);
  check_size(dq, theta.size(), "theta");
  const std::size_t n = theta.size();
  ThetaVector out(n);
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = theta[j] - bilinear_form(dq, unit_vector(n, i), unit_vector(n, j)) * theta[i];
  }
  return out;
}

QVector reflect_q(const DoubledQuiver& dq, std::size_t i, const QVector& q) {
  check_loop_free(dq, i);
  check_size(dq, q.size(), "q");
  const std::size_t n = q.size();
  QVector out(n);
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = q[j] * q[i].pow(-bilinear_form(dq, unit_vector(n, i), unit_vector(n, j)));
  }
  return out;
}

GaussRational q_power(const QVector& q, const DimVector& a) {
  if (q.size() != a.size()) throw ContractViolation("q_power: size mismatch");
  GaussRational p(1L);
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (a[i] != 0) p *= q[i].pow(a[i]);
  }
  return p;
}

Rational theta_dot(const ThetaVector& theta, const DimVector& a) {
  if (theta.size() != a.size()) throw ContractViolation("theta_dot: size mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += theta[i] * a[i];
  return s;
}

std::vector<DimVector> enumerate_Rplus_bounded(const DoubledQuiver& dq, const DimVector& v) {
  check_size(dq, v.size(), "dimension vector");
  std::vector<DimVector> out;
  DimVector a(v.size(), 0);
  // Odometer over the box 0 <= a <= v.
  while (true) {
    std::size_t k = v.size();
    while (k > 0 && a[k - 1] == v[k - 1]) {
      a[k - 1] = 0;
      --k;
    }
    if (k == 0) break;
    ++a[k - 1];
    if (bilinear_form(dq, a, a) <= 2) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

GenericityReport is_generic(const DoubledQuiver& dq, const DimVector& v, const QVector& q, const ThetaVector& theta) {
  GenericityReport r;
  if (!q_power(q, v).is_one()) {
    r.failure = "q^v != 1";
    r.witness = v;
    return r;
  }
  if (sgn(theta_dot(theta, v)) != 0) {
    r.failure = "theta.v != 0";
    r.witness = v;
    return r;
  }
  for (const auto& a : enumerate_Rplus_bounded(dq, v)) {
    if (a == v) continue;
    if (q_power(q, a).is_one() && sgn(theta_dot(theta, a)) == 0) {
      r.failure = "wall";
      r.witness = a;
      return r;
    }
  }
  r.generic = true;
  return r;
}

long RootDatum::pair(std::size_t i, const std::vector<long>& weight) const {
  const auto& h = simple_coroots.at(i);
  if (weight.size() != h.size()) throw ContractViolation("weight has wrong length");
  long s = 0;
  for (std::size_t k = 0; k < h.size(); ++k) s += h[k] * weight[k];
  return s;
}

long RootDatum::form(const std::vector<long>& a, const std::vector<long>& b) const {
  long s = 0;
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t l = 0; l < b.size(); ++l) s += a[k] * gram[k][l] * b[l];
  return s;
}

std::vector<long> RootDatum::weight(const DimVector& w, const DimVector& v) const {
  const std::size_t n = rank();
  if (w.size() != n || v.size() != n) throw ContractViolation("weight: size mismatch");
  std::vector<long> out(2 * n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < 2 * n; ++k) {
      out[k] += w[j] * fundamental_weights[j][k] - v[j] * simple_roots[j][k];
    }
  }
  return out;
}

RootDatum root_datum_from_graph(const DoubledQuiver& dq) {
  if (dq.has_loops()) throw ContractViolation("root datum from a graph with loops is unsupported");
  const std::size_t n = dq.num_vertices();
  RootDatum rd;
  rd.cartan.assign(n, std::vector<long>(n, 0));
  auto adj = dq.adjacency();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rd.cartan[i][j] = (i == j ? 2 : 0) - adj[i][j];

  rd.simple_roots.assign(n, std::vector<long>(2 * n, 0));
  rd.simple_coroots.assign(n, std::vector<long>(2 * n, 0));
  rd.fundamental_weights.assign(n, std::vector<long>(2 * n, 0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) rd.simple_roots[j][i] = rd.cartan[i][j];
    rd.simple_roots[j][n + j] = 1;
    rd.simple_coroots[j][j] = 1;
    rd.fundamental_weights[j][j] = 1;
  }
  // (Lambda, Lambda) = 0, (Lambda_i, d_j) = delta_ij, (d_i, d_j) = -c_ij.
  rd.gram.assign(2 * n, std::vector<long>(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    rd.gram[i][n + i] = rd.gram[n + i][i] = 1;
    for (std::size_t j = 0; j < n; ++j) rd.gram[n + i][n + j] = -rd.cartan[i][j];
  }
  return rd;
}

}  // namespace mqv
