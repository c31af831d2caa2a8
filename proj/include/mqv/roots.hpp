#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mqv/quiver.hpp"
#include "mqv/scalar.hpp"

namespace mqv {

/// Integer vector indexed by vertex position. Dimension vectors are nonnegative;
/// reflections may produce negative entries.
using DimVector = std::vector<long>;
using ThetaVector = std::vector<Rational>;
using QVector = std::vector<GaussRational>;

DimVector unit_vector(std::size_t n, std::size_t i);
long total(const DimVector& v);

/// (a, b) = 2 a.b - sum_{h in H} a_out(h) b_in(h)
long bilinear_form(const DoubledQuiver& dq, const DimVector& a, const DimVector& b);

/// s_i(a) = a - (a, e_i) e_i. Throws LoopError at a vertex with a loop.
DimVector reflect_dim(const DoubledQuiver& dq, std::size_t i, const DimVector& a);
/// r_i(theta)_j = theta_j - (e_i, e_j) theta_i
ThetaVector reflect_theta(const DoubledQuiver& dq, std::size_t i, const ThetaVector& theta);
/// u_i(q)_j = q_j q_i^{-(e_i, e_j)}
QVector reflect_q(const DoubledQuiver& dq, std::size_t i, const QVector& q);

/// prod_i q_i^{a_i}
GaussRational q_power(const QVector& q, const DimVector& a);
Rational theta_dot(const ThetaVector& theta, const DimVector& a);

/// All nonzero a <= v componentwise with (a, a) <= 2, in lexicographic order.
std::vector<DimVector> enumerate_Rplus_bounded(const DoubledQuiver& dq, const DimVector& v);

struct GenericityReport {
  bool generic = false;
  /// Empty when generic; otherwise "q^v != 1", "theta.v != 0", or "wall".
  std::string failure;
  std::optional<DimVector> witness;
};

GenericityReport is_generic(const DoubledQuiver& dq, const DimVector& v, const QVector& q, const ThetaVector& theta);

/// Root datum realized on P = Z^{2n} with basis (Lambda_1..Lambda_n, d_1..d_n).
/// alpha_j = sum_i c_ij Lambda_i + d_j, <h_j, Lambda_i> = delta_ij, <h_j, d_k> = 0.
struct RootDatum {
  std::vector<std::vector<long>> cartan;
  std::vector<std::vector<long>> simple_roots;         // coordinates in P
  std::vector<std::vector<long>> simple_coroots;       // functionals on P
  std::vector<std::vector<long>> fundamental_weights;  // coordinates in P
  std::vector<std::vector<long>> gram;                 // symmetric form on P

  std::size_t rank() const { return cartan.size(); }
  long pair(std::size_t i, const std::vector<long>& weight) const;
  long form(const std::vector<long>& a, const std::vector<long>& b) const;
  /// sum_j w_j Lambda_j - sum_j v_j alpha_j
  std::vector<long> weight(const DimVector& w, const DimVector& v) const;
};

/// Throws ContractViolation when the quiver has loops.
RootDatum root_datum_from_graph(const DoubledQuiver& dq);

}  // namespace mqv
