#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mqv/representation.hpp"

namespace mqv {

enum class StabilityStatus { Stable, SemistableNotStable, Unstable, Unknown };
enum class StabilityMethod { ExactFixpoint, ExhaustiveTiny, RandomizedSearch };

std::string to_string(StabilityStatus s);
std::string to_string(StabilityMethod m);

struct StabilityCertificate {
  Subspace subspace;
  Rational theta_dim;  // theta . dim S
};

struct StabilityVerdict {
  StabilityStatus status = StabilityStatus::Unknown;
  StabilityMethod method = StabilityMethod::ExhaustiveTiny;
  std::optional<StabilityCertificate> certificate;
  /// For framed verdicts: the certificate lives on the extended quiver.
  bool on_extension = false;
  /// Number of distinct invariant subspaces examined.
  std::size_t candidates = 0;
  std::string note;
};

struct StabilityOptions {
  long tiny_bound = 6;        // ExhaustiveTiny applies when total dim <= tiny_bound
  long grid = 1;              // seed entries range over [-grid, grid]
  int budget = 256;           // random seeds for RandomizedSearch
  std::uint64_t seed = 0x5eed;
  std::optional<QVector> q;   // when given with a solution of Phi = q, genericity is reported in the note
};

/// Framed criterion for theta > 0 on I: stable iff the largest B-invariant
/// subspace inside Ker b is zero. Any other theta is routed to the general check
/// on the extended quiver.
StabilityVerdict check_framed_stability(const FramedRepresentation& x, const ThetaVector& theta,
                                        const StabilityOptions& opts = {});

/// Tier 1 (ExhaustiveTiny) for small total dimension, else Tier 2 (RandomizedSearch).
/// Needs theta . dim V = 0.
StabilityVerdict check_general_stability(const Representation& x, const ThetaVector& theta,
                                         const StabilityOptions& opts = {});

/// Re-checks an emitted certificate: invariant, proper, nonzero, sign of theta.dim matches status.
bool verify_certificate(const Representation& x, const ThetaVector& theta, const StabilityVerdict& v);

/// Every distinct proper nonzero invariant subspace reachable from the Tier 1 seeds.
std::vector<Subspace> tiny_candidates(const Representation& x, long grid);

/// gr x on V = ⊕ C_k with C_k a complement of F^{k+1} in F^k, written in the ambient
/// basis. The filtration is descending; V and 0 are added at the ends if missing.
/// Each step must be invariant with theta.dim = 0.
Representation associated_graded(const Representation& x, const std::vector<Subspace>& filtration,
                                 const ThetaVector& theta);

}  // namespace mqv
