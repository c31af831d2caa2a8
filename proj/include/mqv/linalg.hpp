#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mqv/matrix.hpp"

namespace mqv {

/// Result of fraction-free (Bareiss) elimination with full pivoting.
/// `reduced` is the permuted matrix brought to upper-trapezoidal form; the
/// leading rank×rank block is nonsingular upper triangular.
struct Echelon {
  std::size_t rank = 0;
  std::vector<std::size_t> row_perm;  // reduced row k came from row row_perm[k]
  std::vector<std::size_t> col_perm;  // reduced column k came from column col_perm[k]
  int sign = 1;                       // parity of the combined permutation
  QMatrix reduced;
};

Echelon bareiss(const QMatrix& m);

std::size_t rank(const QMatrix& m);
GaussRational det(const QMatrix& m);
Complex det(const CMatrix& m);

/// Throws ContractViolation on singular input.
QMatrix inverse(const QMatrix& m);
CMatrix inverse(const CMatrix& m);

/// Columns form a basis of Ker m; cols(result) = cols(m) - rank(m).
QMatrix kernel_basis(const QMatrix& m);
/// Numeric kernels are not supported; always throws ModeError.
[[noreturn]] CMatrix kernel_basis(const CMatrix& m);

/// Reduced row echelon form by Gauss-Jordan; `pivots` receives pivot columns.
QMatrix rref(const QMatrix& m, std::vector<std::size_t>* pivots = nullptr);

/// Some X with a*X = b, or nullopt when inconsistent.
std::optional<QMatrix> solve(const QMatrix& a, const QMatrix& b);

/// Independent subset of the columns of m spanning its image.
QMatrix column_basis(const QMatrix& m);
/// Canonical basis of the column span (transpose of the nonzero RREF rows of m^T).
QMatrix canonical_basis(const QMatrix& m);

/// Bases of subspaces given by spanning columns, all inside the same ambient space.
QMatrix intersect(const QMatrix& s, const QMatrix& t);
QMatrix span_sum(const QMatrix& s, const QMatrix& t);
/// {v : a v ∈ span s}
QMatrix preimage(const QMatrix& a, const QMatrix& s);
/// True iff every column of v lies in span s.
bool contains(const QMatrix& s, const QMatrix& v);
/// Coordinates c with basis * c = v. Throws if some column is outside the span.
QMatrix coordinates(const QMatrix& basis, const QMatrix& v);
/// Extend the independent columns of s to a basis of the ambient space.
QMatrix complete_basis(const QMatrix& s);

std::vector<double> singular_values(const CMatrix& m);
/// Number of singular values above tol * sigma_max; 0 for the zero or empty matrix.
std::size_t rank_numeric(const CMatrix& m, double tol = 1e-9);
/// Numeric rank is not meaningful on exact data; always throws ModeError.
[[noreturn]] std::size_t rank_numeric(const QMatrix& m, double tol = 1e-9);

}  // namespace mqv
