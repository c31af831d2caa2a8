#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mqv/representation.hpp"
#include "mqv/star_bridge.hpp"

namespace mqv {

/// Quivers by name: "A<n>", "D<n>" (n >= 4), "E6", "affine-A<n>" (a cycle), "affine-D4",
/// "star:l1,l2,..." and "jordan" (one vertex with a loop).
Quiver named_quiver(const std::string& name);

/// Nonzero rational of small height, numerator in [-5, 5], denominator in [1, 4].
GaussRational random_small_rational(std::mt19937_64& rng, bool allow_one = true);
QMatrix random_small_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, long bound = 3);
/// Random invertible matrix with small integer entries (exactly certified).
QMatrix random_invertible(std::mt19937_64& rng, std::size_t n);
std::vector<QMatrix> random_group_element(std::mt19937_64& rng, const DimVector& dims);

/// Random maps with entries in [-bound, bound]; with density < 1 some maps are zeroed.
Representation random_representation(const DoubledQuiver& dq, const DimVector& dims, std::mt19937_64& rng,
                                     long bound = 2, double density = 1.0);
/// Retries until every 1 + x_h x_hbar is invertible.
Representation random_in_domain(const DoubledQuiver& dq, const DimVector& dims, std::mt19937_64& rng,
                                int attempts = 64);
FloatRepresentation random_float_representation(const DoubledQuiver& dq, const DimVector& dims,
                                                std::mt19937_64& rng);
FramedRepresentation random_framed(const DoubledQuiver& dq, const DimVector& v, const DimVector& w,
                                   std::mt19937_64& rng, double density);

enum class ParameterStrategy { GenericRandom, SolveAtVertexwiseTarget };

struct InstanceRecipe {
  std::string quiver;  // named_quiver name
  DimVector dims;
  ParameterStrategy strategy = ParameterStrategy::GenericRandom;
  std::uint64_t seed = 0;
  std::string mode = "exact";
  /// Used by SolveAtVertexwiseTarget: the q to hit, up to the forced vertices.
  std::optional<QVector> target_q;
};

struct GeneratedSolution {
  Representation x;
  QVector q;
  ThetaVector theta;  // theta.dims = 0; the solution is theta-stable
  std::string method;
};

/// Solution of Phi = q at a real root, built by convolving up from a simple root with
/// random generic q and a final random change of basis. Throws GenerationFailure.
GeneratedSolution generate_by_reflection(const DoubledQuiver& dq, const DimVector& target, std::mt19937_64& rng,
                                         int attempts = 32);

/// Irreducible 2x2 tuple with n >= 3 matrices of distinct rational eigenvalues and
/// product one, with image-ladder flags and weights.
LocalSystemData generate_star_tuple(int n, std::mt19937_64& rng, int attempts = 64);

/// Star solution at dims (2; 1, ..., 1) via generate_star_tuple and tuple_to_rep.
GeneratedSolution generate_star_solution(int n, std::mt19937_64& rng);

/// Dispatches on the recipe; deterministic in (recipe, seed).
GeneratedSolution generate_solution(const InstanceRecipe& recipe);

struct FramedSolution {
  FramedRepresentation x;
  ThetaVector theta;  // > 0 on every vertex
  std::vector<std::size_t> word;
};

/// Framed solution of Phi = 1 that is framed-stable for theta > 0, grown from the zero
/// representation by convolutions at q = 1. Finite-type base quivers only.
FramedSolution generate_framed_q1(const DoubledQuiver& dq, const DimVector& w, std::mt19937_64& rng,
                                  int max_steps = 64);

}  // namespace mqv
