#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include "mqv/linalg.hpp"

namespace mqv {

/// One summand left * xi[unknown] * right of a linear matrix equation.
struct LinearTerm {
  std::size_t unknown = 0;
  QMatrix left;
  QMatrix right;
};

/// sum of terms == rhs
struct LinearConstraint {
  std::vector<LinearTerm> terms;
  QMatrix rhs;
};

/// particular + span(directions); each element is a tuple of matrices shaped like the unknowns.
struct AffineSolution {
  std::vector<QMatrix> particular;
  std::vector<std::vector<QMatrix>> directions;
};

/// Shape (rows, cols) of each unknown.
using UnknownShapes = std::vector<std::pair<std::size_t, std::size_t>>;

/// Solves a stacked system of linear matrix equations exactly (vec/Kronecker form).
/// Returns nullopt when the system is inconsistent.
std::optional<AffineSolution> solve_matrix_system(const UnknownShapes& shapes,
                                                  const std::vector<LinearConstraint>& constraints);

/// True iff the tuple satisfies every constraint exactly.
bool satisfies(const std::vector<QMatrix>& xi, const std::vector<LinearConstraint>& constraints);

/// Randomized search over the affine solution space for a tuple of square invertible
/// matrices. Invertibility is certified by exact determinants.
std::optional<std::vector<QMatrix>> find_invertible_member(const AffineSolution& space, std::mt19937_64& rng,
                                                           int attempts = 64);

/// Solve the constraints; when `require_invertible` is set, search for an invertible solution.
std::optional<std::vector<QMatrix>> solve_sylvester_intertwiner(const UnknownShapes& shapes,
                                                                const std::vector<LinearConstraint>& constraints,
                                                                bool require_invertible, std::mt19937_64& rng,
                                                                int attempts = 64);

}  // namespace mqv
