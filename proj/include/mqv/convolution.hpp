#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mqv/representation.hpp"
#include "mqv/stability.hpp"

namespace mqv {

/// Exact identities checked during a convolution (all in the frame where H_i ⊂ Omega).
struct ConvolutionIdentities {
  bool tau_phi_zero = false;      // tau phi_h = 0 for all h in H_i
  bool product_formula = false;   // prod_h (1 + phi_h pi_h) = 1 - q_i^{-1}(q_i - 1 - sigma tau)
  bool relation = false;          // Phi(x') = u_i(q), checked in both frames
  bool per_arrow_scaling = false; // 1 + x'_hbar x'_h = q_i^{-1}(1 + x_hbar x_h)
  bool dims_reflect = false;      // dims' = s_i(dims)
  bool all() const { return tau_phi_zero && product_formula && relation && per_arrow_scaling && dims_reflect; }
};

struct ConvolutionResult {
  Representation x_prime;   // in the orientation of the input
  std::size_t vertex = 0;
  QVector q_prime;
  ThetaVector theta_prime;
  DimVector dims_prime;
  ConvolutionIdentities identities;
  QMatrix kernel;                              // columns: basis of Ker tau_i inside Vhat_i
  std::vector<std::size_t> reoriented_arrows;  // arrows of H_i flipped to reach H_i ⊂ Omega
};

/// S_i. Needs x in Phi^{-1}(q) exactly; q_i != 1, or q_i = 1 with theta_i < 0 and tau_i surjective.
ConvolutionResult middle_convolve(const Representation& x, std::size_t i, const QVector& q, const ThetaVector& theta);

struct InvolutionCertificate {
  Representation x_double;  // S_i(S_i(x))
  std::vector<QMatrix> g;   // g_in(h) x_h = x''_h g_out(h), every g_j invertible
  bool verified = false;
};

/// Throws GenerationFailure when no invertible intertwiner is found within the budget.
InvolutionCertificate verify_involution(const Representation& x, std::size_t i, const QVector& q,
                                        const ThetaVector& theta, std::mt19937_64& rng, int attempts = 64);

enum class Tri { Pass, Fail, Unknown };
std::string to_string(Tri t);

struct LusztigReport {
  bool r1 = false;   // x_h = x'_h off H_i ∪ H_i-bar
  bool r2 = false;   // 0 -> V'_i -> Vhat_i -> V_i -> 0 exact
  bool r3 = false;   // sigma tau = q_i sigma' tau' + q_i - 1
  bool r4 = false;   // x in domain
  bool r4p = false;  // x' in domain
  bool r5 = false;   // Phi(x) = q
  bool r5p = false;  // Phi(x') = u_i(q)
  Tri r6 = Tri::Unknown;
  Tri r6p = Tri::Unknown;
  std::string detail;
};

LusztigReport check_lusztig_conditions(const Representation& x, const Representation& x_prime, std::size_t i,
                                       const QVector& q, const ThetaVector& theta,
                                       const StabilityOptions& opts = {});

struct ReductionStep {
  std::size_t vertex = 0;
  DimVector dims_before;
  DimVector dims_after;
  QVector q_after;
  ThetaVector theta_after;
};

struct ReductionTrace {
  std::vector<ReductionStep> steps;
  Representation final_rep;
  QVector final_q;
  ThetaVector final_theta;
  std::string terminal;  // why the driver stopped
};

/// Greedy: convolve at the first admissible vertex with (dims, e_i) > 0 until none is left.
ReductionTrace reduce_dimension_vector(const Representation& x, const QVector& q, const ThetaVector& theta,
                                       int max_steps = 64);

}  // namespace mqv
