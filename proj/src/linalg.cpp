#include "mqv/linalg.hpp"

#include <numeric>

#include <Eigen/Dense>

namespace mqv {

namespace {

using EigenC = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

EigenC to_eigen(const CMatrix& m) {
  EigenC e(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
  return e;
}

CMatrix from_eigen(const EigenC& e) {
  CMatrix m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = e(i, j);
  return m;
}

void swap_rows(QMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

void swap_cols(QMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

}  // namespace

Echelon bareiss(const QMatrix& m) {
  Echelon e;
  e.reduced = m;
  QMatrix& a = e.reduced;
  const std::size_t rows = m.rows(), cols = m.cols();
  e.row_perm.resize(rows);
  e.col_perm.resize(cols);
  std::iota(e.row_perm.begin(), e.row_perm.end(), 0);
  std::iota(e.col_perm.begin(), e.col_perm.end(), 0);

  GaussRational prev(1L);
  std::size_t k = 0;
  for (; k < std::min(rows, cols); ++k) {
    // Full pivoting: smallest-height nonzero entry in the trailing block.
    std::size_t pr = rows, pc = cols, best = 0;
    for (std::size_t i = k; i < rows; ++i) {
      for (std::size_t j = k; j < cols; ++j) {
        if (a(i, j).is_zero()) continue;
        std::size_t h = a(i, j).height();
        if (pr == rows || h < best) {
          pr = i;
          pc = j;
          best = h;
        }
      }
    }
    if (pr == rows) break;
    if (pr != k) {
      swap_rows(a, k, pr);
      std::swap(e.row_perm[k], e.row_perm[pr]);
      e.sign = -e.sign;
    }
    if (pc != k) {
      swap_cols(a, k, pc);
      std::swap(e.col_perm[k], e.col_perm[pc]);
      e.sign = -e.sign;
    }
    const GaussRational pivot = a(k, k);
    for (std::size_t i = k + 1; i < rows; ++i) {
      const GaussRational lead = a(i, k);
      for (std::size_t j = k + 1; j < cols; ++j) {
        a(i, j) = (pivot * a(i, j) - lead * a(k, j)) / prev;
      }
      a(i, k) = GaussRational();
    }
    prev = pivot;
  }
  e.rank = k;
  return e;
}

std::size_t rank(const QMatrix& m) { return bareiss(m).rank; }

GaussRational det(const QMatrix& m) {
  if (!m.square()) throw ContractViolation("det of non-square matrix " + m.shape_string());
  if (m.rows() == 0) return GaussRational(1L);
  Echelon e = bareiss(m);
  if (e.rank < m.rows()) return GaussRational();
  GaussRational d = e.reduced(m.rows() - 1, m.cols() - 1);
  return e.sign < 0 ? -d : d;
}

Complex det(const CMatrix& m) {
  if (!m.square()) throw ContractViolation("det of non-square matrix " + m.shape_string());
  if (m.rows() == 0) return {1.0, 0.0};
  return to_eigen(m).fullPivLu().determinant();
}

QMatrix rref(const QMatrix& m, std::vector<std::size_t>* pivots) {
  QMatrix a = m;
  std::vector<std::size_t> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t pr = a.rows(), best = 0;
    for (std::size_t i = r; i < a.rows(); ++i) {
      if (a(i, c).is_zero()) continue;
      std::size_t h = a(i, c).height();
      if (pr == a.rows() || h < best) {
        pr = i;
        best = h;
      }
    }
    if (pr == a.rows()) continue;
    swap_rows(a, r, pr);
    const GaussRational inv = a(r, c).inverse();
    for (std::size_t j = c; j < a.cols(); ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, c).is_zero()) continue;
      const GaussRational f = a(i, c);
      for (std::size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    piv.push_back(c);
    ++r;
  }
  if (pivots != nullptr) *pivots = std::move(piv);
  return a;
}

QMatrix kernel_basis(const QMatrix& m) {
  const std::size_t n = m.cols();
  Echelon e = bareiss(m);
  const std::size_t r = e.rank;
  QMatrix basis(n, n - r);
  const QMatrix& u = e.reduced;
  for (std::size_t f = r; f < n; ++f) {
    // Solve U1 y1 = -U2 e_f by back substitution in permuted coordinates.
    std::vector<GaussRational> y(r);
    for (std::size_t kk = r; kk-- > 0;) {
      GaussRational acc = -u(kk, f);
      for (std::size_t j = kk + 1; j < r; ++j) acc -= u(kk, j) * y[j];
      y[kk] = acc / u(kk, kk);
    }
    const std::size_t col = f - r;
    for (std::size_t kk = 0; kk < r; ++kk) basis(e.col_perm[kk], col) = y[kk];
    basis(e.col_perm[f], col) = GaussRational(1L);
  }
  return basis;
}

CMatrix kernel_basis(const CMatrix&) {
  throw ModeError("kernel_basis requires exact mode; use rank_numeric for float data");
}

QMatrix inverse(const QMatrix& m) {
  if (!m.square()) throw ContractViolation("inverse of non-square matrix " + m.shape_string());
  const std::size_t n = m.rows();
  std::vector<std::size_t> piv;
  QMatrix aug = rref(hstack(m, QMatrix::identity(n)), &piv);
  if (piv.size() < n || (n > 0 && piv[n - 1] != n - 1)) throw ContractViolation("inverse of singular matrix");
  return aug.block(0, n, n, n);
}

CMatrix inverse(const CMatrix& m) {
  if (!m.square()) throw ContractViolation("inverse of non-square matrix " + m.shape_string());
  if (m.rows() == 0) return m;
  auto lu = to_eigen(m).fullPivLu();
  if (!lu.isInvertible()) throw ContractViolation("inverse of singular matrix");
  return from_eigen(lu.inverse());
}

std::optional<QMatrix> solve(const QMatrix& a, const QMatrix& b) {
  if (a.rows() != b.rows()) throw ContractViolation("solve: row mismatch " + a.shape_string() + " vs " + b.shape_string());
  const std::size_t n = a.cols();
  std::vector<std::size_t> piv;
  QMatrix aug = rref(hstack(a, b), &piv);
  QMatrix x(n, b.cols());
  for (std::size_t r = 0; r < piv.size(); ++r) {
    if (piv[r] >= n) return std::nullopt;  // pivot in the right-hand side: inconsistent
    for (std::size_t j = 0; j < b.cols(); ++j) x(piv[r], j) = aug(r, n + j);
  }
  return x;
}

QMatrix column_basis(const QMatrix& m) {
  std::vector<std::size_t> piv;
  rref(m, &piv);
  QMatrix out(m.rows(), piv.size());
  for (std::size_t k = 0; k < piv.size(); ++k) out.set_block(0, k, m.column(piv[k]));
  return out;
}

QMatrix canonical_basis(const QMatrix& m) {
  std::vector<std::size_t> piv;
  QMatrix r = rref(m.transpose(), &piv);
  return r.block(0, 0, piv.size(), r.cols()).transpose();
}

QMatrix intersect(const QMatrix& s, const QMatrix& t) {
  if (s.rows() != t.rows()) throw ContractViolation("intersect: ambient dimension mismatch");
  if (s.cols() == 0 || t.cols() == 0) return QMatrix(s.rows(), 0);
  QMatrix k = kernel_basis(hstack(s, -t));
  return column_basis(s * k.block(0, 0, s.cols(), k.cols()));
}

QMatrix span_sum(const QMatrix& s, const QMatrix& t) { return column_basis(hstack(s, t)); }

QMatrix preimage(const QMatrix& a, const QMatrix& s) {
  if (a.rows() != s.rows()) throw ContractViolation("preimage: codomain mismatch");
  QMatrix k = kernel_basis(hstack(a, -s));
  return column_basis(k.block(0, 0, a.cols(), k.cols()));
}

bool contains(const QMatrix& s, const QMatrix& v) {
  if (s.rows() != v.rows()) throw ContractViolation("contains: ambient dimension mismatch");
  return rank(hstack(s, v)) == rank(s);
}

QMatrix coordinates(const QMatrix& basis, const QMatrix& v) {
  auto x = solve(basis, v);
  if (!x) throw ContractViolation("coordinates: vector outside the span of the basis");
  return *x;
}

QMatrix complete_basis(const QMatrix& s) {
  const std::size_t n = s.rows();
  QMatrix out = column_basis(s);
  for (std::size_t j = 0; j < n && out.cols() < n; ++j) {
    QMatrix e(n, 1);
    e(j, 0) = GaussRational(1L);
    if (!contains(out, e)) out = hstack(out, e);
  }
  return out;
}

std::vector<double> singular_values(const CMatrix& m) {
  if (m.empty()) return {};
  Eigen::JacobiSVD<EigenC> svd(to_eigen(m));
  const auto& sv = svd.singularValues();
  return {sv.data(), sv.data() + sv.size()};
}

std::size_t rank_numeric(const CMatrix& m, double tol) {
  std::vector<double> sv = singular_values(m);
  if (sv.empty() || sv.front() == 0.0) return 0;
  const double cut = tol * sv.front();
  return static_cast<std::size_t>(std::count_if(sv.begin(), sv.end(), [cut](double s) { return s > cut; }));
}

std::size_t rank_numeric(const QMatrix&, double) {
  throw ModeError("rank_numeric requires float mode");
}

}  // namespace mqv
