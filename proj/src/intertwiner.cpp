#include "mqv/intertwiner.hpp"

namespace mqv {

namespace {

// Column-major vec index of entry (i, j) of an r-row matrix.
std::size_t vec_index(std::size_t i, std::size_t j, std::size_t r) { return j * r + i; }

std::vector<QMatrix> unvec(const QMatrix& column, std::size_t col, const UnknownShapes& shapes,
                           const std::vector<std::size_t>& offsets) {
  std::vector<QMatrix> out;
  out.reserve(shapes.size());
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    auto [r, c] = shapes[k];
    QMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = column(offsets[k] + vec_index(i, j, r), col);
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

std::optional<AffineSolution> solve_matrix_system(const UnknownShapes& shapes,
                                                  const std::vector<LinearConstraint>& constraints) {
  std::vector<std::size_t> offsets(shapes.size());
  std::size_t n = 0;
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    offsets[k] = n;
    n += shapes[k].first * shapes[k].second;
  }
  std::size_t m = 0;
  for (const auto& c : constraints) m += c.rhs.rows() * c.rhs.cols();

  QMatrix a(m, n), b(m, 1);
  std::size_t row0 = 0;
  for (const auto& c : constraints) {
    const std::size_t cr = c.rhs.rows(), cc = c.rhs.cols();
    for (const auto& t : c.terms) {
      if (t.unknown >= shapes.size()) throw ContractViolation("constraint refers to an unknown that does not exist");
      auto [xr, xc] = shapes[t.unknown];
      if (t.left.rows() != cr || t.left.cols() != xr || t.right.rows() != xc || t.right.cols() != cc) {
        throw ContractViolation("shape mismatch in linear matrix constraint: left " + t.left.shape_string() +
                                ", unknown " + std::to_string(xr) + "x" + std::to_string(xc) + ", right " +
                                t.right.shape_string() + ", rhs " + c.rhs.shape_string());
      }
      // (L X R)(p, q) = sum_{i,j} L(p, i) X(i, j) R(j, q)
      for (std::size_t p = 0; p < cr; ++p) {
        for (std::size_t i = 0; i < xr; ++i) {
          const GaussRational& l = t.left(p, i);
          if (l.is_zero()) continue;
          for (std::size_t j = 0; j < xc; ++j) {
            for (std::size_t q = 0; q < cc; ++q) {
              const GaussRational& r = t.right(j, q);
              if (r.is_zero()) continue;
              a(row0 + vec_index(p, q, cr), offsets[t.unknown] + vec_index(i, j, xr)) += l * r;
            }
          }
        }
      }
    }
    for (std::size_t p = 0; p < cr; ++p)
      for (std::size_t q = 0; q < cc; ++q) b(row0 + vec_index(p, q, cr), 0) = c.rhs(p, q);
    row0 += cr * cc;
  }

  auto particular = solve(a, b);
  if (!particular) return std::nullopt;
  QMatrix kernel = kernel_basis(a);
  AffineSolution sol;
  sol.particular = unvec(*particular, 0, shapes, offsets);
  for (std::size_t k = 0; k < kernel.cols(); ++k) sol.directions.push_back(unvec(kernel, k, shapes, offsets));
  return sol;
}

bool satisfies(const std::vector<QMatrix>& xi, const std::vector<LinearConstraint>& constraints) {
  for (const auto& c : constraints) {
    QMatrix acc(c.rhs.rows(), c.rhs.cols());
    for (const auto& t : c.terms) acc += t.left * xi.at(t.unknown) * t.right;
    if (acc != c.rhs) return false;
  }
  return true;
}

std::optional<std::vector<QMatrix>> find_invertible_member(const AffineSolution& space, std::mt19937_64& rng,
                                                           int attempts) {
  auto all_invertible = [](const std::vector<QMatrix>& xi) {
    for (const auto& m : xi) {
      if (!m.square()) return false;
      if (det(m).is_zero()) return false;
    }
    return true;
  };
  if (all_invertible(space.particular)) return space.particular;
  if (space.directions.empty()) return std::nullopt;
  std::uniform_int_distribution<long> coeff(-7, 7);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    std::vector<QMatrix> xi = space.particular;
    for (const auto& dir : space.directions) {
      GaussRational c(coeff(rng));
      if (c.is_zero()) continue;
      for (std::size_t k = 0; k < xi.size(); ++k) xi[k] += dir[k] * c;
    }
    if (all_invertible(xi)) return xi;
  }
  return std::nullopt;
}

std::optional<std::vector<QMatrix>> solve_sylvester_intertwiner(const UnknownShapes& shapes,
                                                                const std::vector<LinearConstraint>& constraints,
                                                                bool require_invertible, std::mt19937_64& rng,
                                                                int attempts) {
  auto space = solve_matrix_system(shapes, constraints);
  if (!space) return std::nullopt;
  if (!require_invertible) return space->particular;
  return find_invertible_member(*space, rng, attempts);
}

}  // namespace mqv
