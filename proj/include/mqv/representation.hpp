#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mqv/linalg.hpp"
#include "mqv/quiver.hpp"
#include "mqv/roots.hpp"

namespace mqv {

/// Representation of a doubled quiver: one matrix dims[in(h)] x dims[out(h)] per h in H.
template <typename T>
class BasicRepresentation {
 public:
  BasicRepresentation() = default;
  BasicRepresentation(DoubledQuiver dq, DimVector dims) : dq_(std::move(dq)), dims_(std::move(dims)) {
    check_dims();
    maps_.reserve(dq_.num_arrows());
    for (const auto& h : dq_.arrows()) maps_.emplace_back(dim(h.in), dim(h.out));
  }
  BasicRepresentation(DoubledQuiver dq, DimVector dims, std::vector<Matrix<T>> maps)
      : dq_(std::move(dq)), dims_(std::move(dims)), maps_(std::move(maps)) {
    check_dims();
    if (maps_.size() != dq_.num_arrows()) throw ContractViolation("representation needs one matrix per arrow of H");
    for (std::size_t h = 0; h < maps_.size(); ++h) check_shape(h, maps_[h]);
  }

  const DoubledQuiver& quiver() const { return dq_; }
  const DimVector& dims() const { return dims_; }
  std::size_t dim(std::size_t i) const { return static_cast<std::size_t>(dims_.at(i)); }
  long total_dim() const { return total(dims_); }

  const Matrix<T>& map(std::size_t h) const { return maps_.at(h); }
  const Matrix<T>& map(const std::string& id) const { return maps_.at(dq_.find(id)); }
  void set_map(std::size_t h, Matrix<T> m) {
    check_shape(h, m);
    maps_.at(h) = std::move(m);
  }
  void set_map(const std::string& id, Matrix<T> m) { set_map(dq_.find(id), std::move(m)); }
  const std::vector<Matrix<T>>& maps() const { return maps_; }

 private:
  void check_dims() const {
    if (dims_.size() != dq_.num_vertices()) throw ContractViolation("dimension vector length does not match vertex count");
    for (long d : dims_) {
      if (d < 0) throw ContractViolation("negative dimension");
    }
  }
  void check_shape(std::size_t h, const Matrix<T>& m) const {
    const auto& a = dq_.arrow(h);
    if (m.rows() != dim(a.in) || m.cols() != dim(a.out)) {
      throw ContractViolation("map for arrow '" + a.id + "' has shape " + m.shape_string() + ", expected " +
                              std::to_string(dim(a.in)) + "x" + std::to_string(dim(a.out)));
    }
  }

  DoubledQuiver dq_;
  DimVector dims_;
  std::vector<Matrix<T>> maps_;
};

using Representation = BasicRepresentation<GaussRational>;
using FloatRepresentation = BasicRepresentation<Complex>;

FloatRepresentation to_float(const Representation& x);

/// Per-vertex column bases S_i ⊆ V_i.
struct Subspace {
  std::vector<QMatrix> basis;

  DimVector dims() const;
  long total_dim() const { return total(dims()); }
  static Subspace zero(const DimVector& dims);
  static Subspace full(const DimVector& dims);
  /// Canonical per-vertex bases, so equal subspaces compare equal.
  Subspace canonical() const;
  friend bool operator==(const Subspace& a, const Subspace& b) { return a.basis == b.basis; }
};

// ---- elementary per-arrow data ----------------------------------------------

/// 1 + x_h x_hbar on V_in(h).
template <typename T>
Matrix<T> factor(const BasicRepresentation<T>& x, std::size_t h) {
  const auto& a = x.quiver().arrow(h);
  return Matrix<T>::identity(x.dim(a.in)) + x.map(h) * x.map(a.partner);
}

template <typename T>
Matrix<T> inverse_or_domain_error(const Matrix<T>& m, const std::string& arrow) {
  try {
    return inverse(m);
  } catch (const ContractViolation&) {
    throw DomainError("singular factor at arrow '" + arrow + "'", arrow);
  }
}

/// det(1 + x_h x_hbar) != 0 for non-loops, det x_h != 0 for loops.
bool in_invertibility_domain(const Representation& x);

// ---- Phi ---------------------------------------------------------------------

/// Phi_i(x) = prod^<_{h in H_i} (1 + x_h x_hbar)^{eps(h)}. Throws LoopError on loops.
template <typename T>
Matrix<T> phi_at(const BasicRepresentation<T>& x, std::size_t i) {
  const auto& dq = x.quiver();
  if (dq.has_loop_at(i)) throw LoopError("phi at vertex '" + dq.vertex_name(i) + "' which carries a loop; use psi");
  Matrix<T> p = Matrix<T>::identity(x.dim(i));
  for (std::size_t h : dq.incoming(i)) {
    Matrix<T> f = factor(x, h);
    p = p * (dq.arrow(h).eps > 0 ? f : inverse_or_domain_error(f, dq.arrow(h).id));
  }
  return p;
}

template <typename T>
std::vector<Matrix<T>> phi(const BasicRepresentation<T>& x) {
  if (x.quiver().has_loops()) throw LoopError("phi is undefined on quivers with loops; use psi");
  std::vector<Matrix<T>> out;
  for (std::size_t i = 0; i < x.quiver().num_vertices(); ++i) out.push_back(phi_at(x, i));
  return out;
}

template <typename T>
struct PhiSplit {
  Matrix<T> plus;   // prod^< over H_i ∩ Omega
  Matrix<T> minus;  // prod^> over H_i ∩ Omega-bar
};

/// Phi_i = Phi_i^+ (Phi_i^-)^{-1}; needs Omega-before-Omega-bar inside H_i.
template <typename T>
PhiSplit<T> phi_split_at(const BasicRepresentation<T>& x, std::size_t i) {
  const auto& dq = x.quiver();
  if (!dq.omega_first_at(i)) {
    throw ContractViolation("phi_split needs Omega arrows before Omega-bar arrows at vertex '" + dq.vertex_name(i) + "'");
  }
  if (dq.has_loop_at(i)) throw LoopError("phi_split at a vertex with a loop");
  PhiSplit<T> s{Matrix<T>::identity(x.dim(i)), Matrix<T>::identity(x.dim(i))};
  for (std::size_t h : dq.incoming(i)) {
    Matrix<T> f = factor(x, h);
    if (dq.arrow(h).eps > 0) {
      s.plus = s.plus * f;
    } else {
      s.minus = f * s.minus;
    }
  }
  return s;
}

template <typename T>
std::vector<PhiSplit<T>> phi_split(const BasicRepresentation<T>& x) {
  std::vector<PhiSplit<T>> out;
  for (std::size_t i = 0; i < x.quiver().num_vertices(); ++i) out.push_back(phi_split_at(x, i));
  return out;
}

// ---- sigma / tau -------------------------------------------------------------

template <typename T>
struct SigmaTau {
  Matrix<T> sigma;                   // V_i -> Vhat_i
  Matrix<T> tau;                     // Vhat_i -> V_i
  std::vector<std::size_t> arrows;   // H_i in order; block k of Vhat_i is V_out(arrows[k])
  std::vector<std::size_t> offsets;  // row offset of each block inside Vhat_i
  std::size_t hat_dim = 0;
};

/// Block layout of Vhat_i = ⊕_{h in H_i} V_out(h).
template <typename T>
SigmaTau<T> hat_layout(const BasicRepresentation<T>& x, std::size_t i) {
  SigmaTau<T> st;
  for (std::size_t h : x.quiver().incoming(i)) {
    st.arrows.push_back(h);
    st.offsets.push_back(st.hat_dim);
    st.hat_dim += x.dim(x.quiver().arrow(h).out);
  }
  return st;
}

/// sigma_i = sum_{Omega} iota_h x_hbar + sum_{Omega-bar} iota_h x_hbar Phi_h^-
/// tau_i   = sum_{Omega} Phi_h^+ x_h pi_h - q_i sum_{Omega-bar} x_h pi_h
template <typename T>
SigmaTau<T> sigma_tau(const BasicRepresentation<T>& x, std::size_t i, const T& qi) {
  const auto& dq = x.quiver();
  if (dq.has_loop_at(i)) throw LoopError("sigma/tau at vertex '" + dq.vertex_name(i) + "' which carries a loop");
  if (!dq.omega_first_at(i)) {
    throw ContractViolation("sigma/tau needs Omega arrows before Omega-bar arrows at vertex '" + dq.vertex_name(i) + "'");
  }
  SigmaTau<T> st = hat_layout(x, i);
  st.sigma = Matrix<T>(st.hat_dim, x.dim(i));
  st.tau = Matrix<T>(x.dim(i), st.hat_dim);
  Matrix<T> plus = Matrix<T>::identity(x.dim(i));   // Phi_h^+ for the current h
  Matrix<T> minus = Matrix<T>::identity(x.dim(i));  // Phi_h^- for the current h
  for (std::size_t k = 0; k < st.arrows.size(); ++k) {
    const std::size_t h = st.arrows[k];
    const auto& a = dq.arrow(h);
    const Matrix<T>& xh = x.map(h);
    const Matrix<T>& xbar = x.map(a.partner);
    if (a.eps > 0) {
      st.sigma.set_block(st.offsets[k], 0, xbar);
      st.tau.set_block(0, st.offsets[k], plus * xh);
      plus = plus * factor(x, h);
    } else {
      st.sigma.set_block(st.offsets[k], 0, xbar * minus);
      st.tau.set_block(0, st.offsets[k], -(qi * xh));
      minus = factor(x, h) * minus;
    }
  }
  return st;
}

// ---- mu, psi, relation -------------------------------------------------------

/// mu_i = sum_{h in H_i} eps(h) x_h x_hbar
template <typename T>
std::vector<Matrix<T>> mu(const BasicRepresentation<T>& x) {
  const auto& dq = x.quiver();
  std::vector<Matrix<T>> out;
  for (std::size_t i = 0; i < dq.num_vertices(); ++i) {
    Matrix<T> m(x.dim(i), x.dim(i));
    for (std::size_t h : dq.incoming(i)) {
      Matrix<T> p = x.map(h) * x.map(dq.arrow(h).partner);
      if (dq.arrow(h).eps > 0) {
        m += p;
      } else {
        m -= p;
      }
    }
    out.push_back(std::move(m));
  }
  return out;
}

/// Psi_i = prod^<_{loops h in H_i ∩ Omega} [x_h, x_hbar]^m * prod^<_{non-loops h in H_i} (1 + x_h x_hbar)^{eps}
template <typename T>
std::vector<Matrix<T>> psi(const BasicRepresentation<T>& x) {
  const auto& dq = x.quiver();
  std::vector<Matrix<T>> out;
  for (std::size_t i = 0; i < dq.num_vertices(); ++i) {
    Matrix<T> loops = Matrix<T>::identity(x.dim(i));
    Matrix<T> rest = Matrix<T>::identity(x.dim(i));
    for (std::size_t h : dq.incoming(i)) {
      const auto& a = dq.arrow(h);
      if (a.out == a.in) {
        if (a.eps < 0) continue;
        const Matrix<T>& xh = x.map(h);
        const Matrix<T>& xb = x.map(a.partner);
        Matrix<T> xh_inv = inverse_or_domain_error(xh, a.id);
        Matrix<T> xb_inv = inverse_or_domain_error(xb, dq.arrow(a.partner).id);
        loops = loops * (xh * xb * xh_inv * xb_inv);
      } else {
        Matrix<T> f = factor(x, h);
        rest = rest * (a.eps > 0 ? f : inverse_or_domain_error(f, a.id));
      }
    }
    out.push_back(loops * rest);
  }
  return out;
}

template <typename T>
struct RelationReport {
  std::vector<Matrix<T>> residual;  // Phi_i(x) - q_i
  std::vector<double> max_abs;      // max-modulus entry per vertex
  bool exact_zero = true;           // every residual entry is exactly zero
  double max_residual = 0.0;
};

template <typename T>
RelationReport<T> check_relation(const BasicRepresentation<T>& x, const std::vector<T>& q) {
  if (q.size() != x.quiver().num_vertices()) throw ContractViolation("q has wrong length");
  RelationReport<T> r;
  auto p = phi(x);
  for (std::size_t i = 0; i < p.size(); ++i) {
    Matrix<T> res = p[i] - Matrix<T>::scalar(x.dim(i), q[i]);
    double m = max_norm(res);
    r.exact_zero = r.exact_zero && res.is_zero();
    r.max_residual = std::max(r.max_residual, m);
    r.max_abs.push_back(m);
    r.residual.push_back(std::move(res));
  }
  return r;
}

template <typename T>
bool solves_relation(const BasicRepresentation<T>& x, const std::vector<T>& q) {
  return check_relation(x, q).exact_zero;
}

// ---- group action and orientation --------------------------------------------

/// (g.x)_h = g_in(h) x_h g_out(h)^{-1}
template <typename T>
BasicRepresentation<T> act(const std::vector<Matrix<T>>& g, const BasicRepresentation<T>& x) {
  const auto& dq = x.quiver();
  if (g.size() != dq.num_vertices()) throw ContractViolation("group element needs one matrix per vertex");
  std::vector<Matrix<T>> ginv;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i].rows() != x.dim(i) || g[i].cols() != x.dim(i)) throw ContractViolation("group element has wrong shape");
    ginv.push_back(inverse(g[i]));
  }
  std::vector<Matrix<T>> maps;
  for (std::size_t h = 0; h < dq.num_arrows(); ++h) {
    const auto& a = dq.arrow(h);
    maps.push_back(g[a.in] * x.map(h) * ginv[a.out]);
  }
  return BasicRepresentation<T>(dq, x.dims(), std::move(maps));
}

/// Flips the orientation of the pair {h, h-bar} and replaces x_h by
/// -(1 + x_h x_hbar)^{-1} x_h. Phi is unchanged; applying it twice to the same h is the identity.
template <typename T>
BasicRepresentation<T> reorient(const BasicRepresentation<T>& x, std::size_t h) {
  const auto& dq = x.quiver();
  const auto& a = dq.arrow(h);
  if (a.out == a.in) throw LoopError("cannot reorient a loop");
  Matrix<T> f = inverse_or_domain_error(factor(x, h), a.id);
  std::vector<Matrix<T>> maps = x.maps();
  maps[h] = -(f * x.map(h));
  return BasicRepresentation<T>(dq.reoriented(h), x.dims(), std::move(maps));
}

/// Arrows h in H_i with eps(h) = -1, i.e. those a convolution at i must reorient.
std::vector<std::size_t> arrows_to_normalize(const DoubledQuiver& dq, std::size_t i);

template <typename T>
BasicRepresentation<T> reorient_all(BasicRepresentation<T> x, const std::vector<std::size_t>& arrows) {
  for (std::size_t h : arrows) x = reorient(x, h);
  return x;
}

// ---- subspaces ---------------------------------------------------------------

enum class ClosureDirection { SmallestContaining, LargestInside };

/// x-invariance over every arrow of H.
bool is_invariant(const Representation& x, const Subspace& s, std::string* violating_arrow = nullptr);

/// Smallest x-invariant subspace containing seed, or largest inside it.
Subspace invariant_closure(const Representation& x, const Subspace& seed, ClosureDirection direction);

// ---- first-order expansion ---------------------------------------------------

struct QuadraticProbe {
  std::vector<double> t;
  std::vector<double> error;                    // ||Phi(t x) - 1 - t^2 mu(x)||_F over all vertices
  std::vector<std::vector<double>> per_vertex;  // same, per vertex
  std::vector<std::string> warnings;
  bool exact_match = false;  // error identically zero on the grid; slope undefined
  double slope = 0.0;        // least-squares slope of log error against log t
};

QuadraticProbe quadratic_approx_probe(const FloatRepresentation& x, const std::vector<double>& t_grid);
/// Exact data is refused: the probe is a floating-point measurement.
[[noreturn]] QuadraticProbe quadratic_approx_probe(const Representation& x, const std::vector<double>& t_grid);

std::vector<double> default_t_grid();

// ---- framed representations --------------------------------------------------

struct FramedRepresentation {
  Representation base;
  DimVector w;
  std::vector<QMatrix> a;  // a_i: W_i -> V_i, shape v_i x w_i
  std::vector<QMatrix> b;  // b_i: V_i -> W_i, shape w_i x v_i

  FramedRepresentation() = default;
  FramedRepresentation(Representation base, DimVector w);  // a = b = 0
  FramedRepresentation(Representation base, DimVector w, std::vector<QMatrix> a, std::vector<QMatrix> b);
};

inline const std::string& framing_vertex_name() {
  static const std::string name = "inf";
  return name;
}
std::string framing_arrow_name(const std::string& vertex, long k);

struct FramedExtension {
  Representation x;  // on the extended quiver; the last vertex is the framing vertex
  QVector q;
  ThetaVector theta;
  std::size_t infinity = 0;
};

/// Extended quiver: framing arrows inf -> i (columns of a_i, reverses carry rows of b_i),
/// ordered framing-Omega, base order, framing-Omega-bar.
FramedExtension frame(const FramedRepresentation& x, const QVector& q, const ThetaVector& theta);
/// Recover (B, a, b) from an extended representation built by frame().
FramedRepresentation unframe(const Representation& ext, const DoubledQuiver& base_quiver, const DimVector& w);

struct ArmComplex {
  QMatrix sigma;
  QMatrix tau;
  std::size_t corank = 0;  // n = corank tau_i
  long rank_q = 0;         // dim Ker tau_i - rank sigma_i
  long expected = 0;       // <h_i, w - v> + n
  bool complex_ok = false; // tau sigma = 0
  bool rank_ok = false;
};

/// Complex V_i -> ⊕ V_out(h) ⊕ W_i -> V_i at q = 1. Throws StabilityViolation if sigma_i is not injective.
ArmComplex arm_complex(const FramedRepresentation& x, std::size_t i);

// ---- Jacobian ----------------------------------------------------------------

/// Complex Jacobian of x -> (Phi_i(x))_i at x; columns index entries of the maps
/// (arrow by arrow, row-major), rows index entries of the Phi_i (vertex by vertex, row-major).
CMatrix phi_jacobian(const FloatRepresentation& x);

struct DimensionCheck {
  std::size_t domain_dim = 0;   // dim M(V)
  std::size_t group_dim = 0;    // dim G_V
  std::size_t rank = 0;         // numeric rank of dPhi
  std::size_t kernel_dim = 0;
  long measured = 0;            // dim Ker dPhi - (dim G_V - 1)
  long expected = 0;            // 2 - (v, v)
  double gap = 0.0;             // sigma_r / sigma_{r+1} (infinity when full rank)
  bool match = false;
};

DimensionCheck jacobian_dimension_check(const FloatRepresentation& x, double tol = 1e-9);

}  // namespace mqv
