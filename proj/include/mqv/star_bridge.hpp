#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mqv/representation.hpp"

namespace mqv {

/// Monodromy tuple A_1..A_n on C^r with eigenvalue ladders and optional flags.
struct LocalSystemData {
  long r = 0;
  std::vector<QMatrix> matrices;                   // A_i, r x r
  std::vector<std::vector<GaussRational>> ladders;  // xi_{i,0..l_i}
  std::vector<std::vector<Rational>> beta;          // beta_i^0..beta_i^{l_i}; may be empty
  /// flags[i][j-1]: basis columns of F_i^j for j = 1..l_i.
  std::optional<std::vector<std::vector<QMatrix>>> flags;

  std::size_t n() const { return matrices.size(); }
  std::vector<int> arm_lengths() const;
  /// A_1 ... A_n == 1
  bool product_is_one() const;
};

/// Dimension vector on build_star(arm_lengths): r at the center, v[i][j-1] at [i,j].
DimVector star_dims(const StarQuiver& sq, long r, const std::vector<std::vector<long>>& v);

/// q_{i,j} = xi^{j-1}/xi^j, q_0 = prod_i (xi_i^0)^{-1}. Does not need dims.
QVector star_q(const StarQuiver& sq, const std::vector<std::vector<GaussRational>>& ladders);

/// (q, theta) from ladders and weights; checks theta.dims = 0 and q^dims = 1.
std::pair<QVector, ThetaVector> params_from_weights(const StarQuiver& sq,
                                                    const std::vector<std::vector<GaussRational>>& ladders,
                                                    const std::vector<std::vector<Rational>>& beta,
                                                    const DimVector& dims);

struct RepToTupleResult {
  LocalSystemData data;  // flags filled with F^j = Im(a_{i,0} ... a_{i,j-1})
  bool containments = true;   // (A_i - xi_{i,j}) F^j ⊂ F^{j+1}, F^{l_i+1} = 0
  bool flag_dims = true;      // dim F^j = v_{i,j}
  bool a_injective = true;
  std::string detail;
};

/// A_i = xi_{i,0}(1 + a_{i,0} b_{i,0}). Throws ContractViolation if x does not solve
/// Phi = star_q(ladders). With assume_stable, a non-injective a_{i,j} throws StabilityViolation.
RepToTupleResult rep_to_tuple(const StarQuiver& sq, const Representation& x,
                              const std::vector<std::vector<GaussRational>>& ladders, bool assume_stable = false);

/// Needs flags and A_1...A_n = 1; a_{i,j} are inclusions F^{j+1} -> F^j in the given bases.
std::pair<StarQuiver, Representation> tuple_to_rep(const LocalSystemData& d);

/// F^j = Im (A - xi_0)...(A - xi_{j-1}) for j = 1..l.
std::vector<QMatrix> image_ladder_flags(const QMatrix& a, const std::vector<GaussRational>& ladder);

struct BetaCandidate {
  QMatrix basis;  // columns span M
  Rational lhs;   // sum theta_ij dim(M ∩ F_i^j) / dim M
  Rational rhs;   // sum theta_ij dim F_i^j / r
  bool violates_semistability = false;  // lhs > rhs
  bool violates_stability = false;      // lhs >= rhs
};

struct BetaStabilityReport {
  std::vector<BetaCandidate> candidates;
  bool semistability_disproved = false;
  bool stability_disproved = false;
};

/// Candidates are joint-invariant closures of the seeds (columns); with no seeds, the
/// coordinate vectors and eigenvectors for ladder values are used. Missing flags are
/// replaced by image-ladder flags.
BetaStabilityReport beta_stability_report(const LocalSystemData& d, const std::vector<QMatrix>& seeds = {});

/// A cycle is a word of arrow ids h_1..h_k with out(h_m) = in(h_{m+1}) and out(h_k) = in(h_1);
/// its value is Tr(x_{h_1} ... x_{h_k}). Keys join ids with ','.
std::map<std::string, GaussRational> trace_coordinates(const Representation& x,
                                                       const std::vector<std::vector<std::string>>& cycles);
/// All cycles of length 1..max_len, each listed once up to rotation.
std::vector<std::vector<std::string>> enumerate_cycles(const DoubledQuiver& dq, std::size_t max_len);

}  // namespace mqv
