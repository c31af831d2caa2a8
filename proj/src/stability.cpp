#include "mqv/stability.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

namespace mqv {

std::string to_string(StabilityStatus s) {
  switch (s) {
    case StabilityStatus::Stable:
      return "Stable";
    case StabilityStatus::SemistableNotStable:
      return "SemistableNotStable";
    case StabilityStatus::Unstable:
      return "Unstable";
    case StabilityStatus::Unknown:
      return "Unknown";
  }
  return "Unknown";
}

std::string to_string(StabilityMethod m) {
  switch (m) {
    case StabilityMethod::ExactFixpoint:
      return "ExactFixpoint";
    case StabilityMethod::ExhaustiveTiny:
      return "ExhaustiveTiny";
    case StabilityMethod::RandomizedSearch:
      return "RandomizedSearch";
  }
  return "ExhaustiveTiny";
}

namespace {

std::string subspace_key(const Subspace& s) {
  std::string key;
  for (const auto& b : s.basis) {
    key += std::to_string(b.rows()) + "x" + std::to_string(b.cols()) + ":";
    for (const auto& v : b.data()) key += v.to_string() + ",";
    key += "|";
  }
  return key;
}

bool proper_nonzero(const Subspace& s, const DimVector& dims) {
  const DimVector d = s.dims();
  return total(d) > 0 && d != dims;
}

// Order used to pick among several destabilizers: total dim, dims, canonical basis.
bool prefer(const Subspace& a, const Subspace& b) {
  const long ta = a.total_dim(), tb = b.total_dim();
  if (ta != tb) return ta < tb;
  const DimVector da = a.dims(), db = b.dims();
  if (da != db) return da < db;
  return subspace_key(a) < subspace_key(b);
}

class CandidatePool {
 public:
  explicit CandidatePool(const DimVector& dims) : dims_(dims) {}
  void add(const Subspace& s) {
    if (!proper_nonzero(s, dims_)) return;
    if (seen_.insert(subspace_key(s)).second) items_.push_back(s);
  }
  const std::vector<Subspace>& items() const { return items_; }

 private:
  DimVector dims_;
  std::set<std::string> seen_;
  std::vector<Subspace> items_;
};

void add_coordinate_seeds(const Representation& x, CandidatePool& pool) {
  const std::size_t n = x.quiver().num_vertices();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Subspace seed;
    for (std::size_t i = 0; i < n; ++i) {
      seed.basis.push_back((mask >> i) & 1U ? QMatrix::identity(x.dim(i)) : QMatrix(x.dim(i), 0));
    }
    pool.add(invariant_closure(x, seed, ClosureDirection::SmallestContaining));
    pool.add(invariant_closure(x, seed, ClosureDirection::LargestInside));
  }
}

// All vectors in [-grid, grid]^d whose first nonzero entry is positive.
std::vector<QMatrix> grid_vectors(std::size_t d, long grid) {
  std::vector<QMatrix> out;
  std::vector<long> v(d, -grid);
  if (d == 0) return out;
  while (true) {
    auto first = std::find_if(v.begin(), v.end(), [](long e) { return e != 0; });
    if (first != v.end() && *first > 0) {
      QMatrix m(d, 1);
      for (std::size_t k = 0; k < d; ++k) m(k, 0) = GaussRational(v[k]);
      out.push_back(std::move(m));
    }
    std::size_t k = d;
    while (k > 0 && v[k - 1] == grid) {
      v[k - 1] = -grid;
      --k;
    }
    if (k == 0) break;
    ++v[k - 1];
  }
  return out;
}

void add_grid_seeds(const Representation& x, long grid, CandidatePool& pool) {
  const std::size_t n = x.quiver().num_vertices();
  for (std::size_t i = 0; i < n; ++i) {
    for (const QMatrix& vec : grid_vectors(x.dim(i), grid)) {
      Subspace line = Subspace::zero(x.dims());
      line.basis[i] = vec;
      pool.add(invariant_closure(x, line, ClosureDirection::SmallestContaining));
      Subspace hyper = Subspace::full(x.dims());
      hyper.basis[i] = kernel_basis(vec.transpose());
      pool.add(invariant_closure(x, hyper, ClosureDirection::LargestInside));
    }
  }
}

StabilityVerdict verdict_from_pool(const std::vector<Subspace>& cands, const ThetaVector& theta, bool complete,
                                   StabilityMethod method) {
  StabilityVerdict v;
  v.method = method;
  v.candidates = cands.size();
  const Subspace* worst_pos = nullptr;
  const Subspace* worst_zero = nullptr;
  for (const auto& s : cands) {
    const int sign = sgn(theta_dot(theta, s.dims()));
    if (sign > 0 && (worst_pos == nullptr || prefer(s, *worst_pos))) worst_pos = &s;
    if (sign == 0 && (worst_zero == nullptr || prefer(s, *worst_zero))) worst_zero = &s;
  }
  if (worst_pos != nullptr) {
    v.status = StabilityStatus::Unstable;
    v.certificate = StabilityCertificate{*worst_pos, theta_dot(theta, worst_pos->dims())};
  } else if (worst_zero != nullptr) {
    v.certificate = StabilityCertificate{*worst_zero, Rational(0)};
    if (complete) {
      v.status = StabilityStatus::SemistableNotStable;
    } else {
      v.status = StabilityStatus::Unknown;
      v.note = "not stable (certificate with theta.dim = 0); semistability undecided";
    }
  } else {
    v.status = complete ? StabilityStatus::Stable : StabilityStatus::Unknown;
  }
  return v;
}

// Columns of upper extending a basis of lower to a basis of span(upper).
QMatrix complement_in(const QMatrix& lower, const QMatrix& upper) {
  QMatrix acc = column_basis(lower);
  QMatrix out(upper.rows(), 0);
  for (std::size_t c = 0; c < upper.cols(); ++c) {
    QMatrix col = upper.column(c);
    QMatrix next = hstack(acc, col);
    if (rank(next) > acc.cols()) {
      acc = next;
      out = hstack(out, col);
    }
  }
  return out;
}

StabilityVerdict emit(const Representation& x, const ThetaVector& theta, StabilityVerdict v) {
  if (!verify_certificate(x, theta, v)) {
    throw Error("internal: emitted stability certificate failed re-verification");
  }
  return v;
}

}  // namespace

std::vector<Subspace> tiny_candidates(const Representation& x, long grid) {
  CandidatePool pool(x.dims());
  add_coordinate_seeds(x, pool);
  add_grid_seeds(x, grid, pool);
  return pool.items();
}

StabilityVerdict check_general_stability(const Representation& x, const ThetaVector& theta,
                                         const StabilityOptions& opts) {
  const auto& dq = x.quiver();
  if (theta.size() != dq.num_vertices()) throw ContractViolation("theta has wrong length");
  if (sgn(theta_dot(theta, x.dims())) != 0) throw ContractViolation("stability needs theta . dim V = 0");

  if (x.total_dim() <= opts.tiny_bound) {
    return emit(x, theta, verdict_from_pool(tiny_candidates(x, opts.grid), theta, true, StabilityMethod::ExhaustiveTiny));
  }

  CandidatePool pool(x.dims());
  add_coordinate_seeds(x, pool);
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<long> entry(-3, 3);
  const std::size_t n = dq.num_vertices();
  for (int trial = 0; trial < opts.budget; ++trial) {
    Subspace seed = Subspace::zero(x.dims());
    std::size_t i = rng() % n;
    if (x.dim(i) == 0) continue;
    QMatrix vec(x.dim(i), 1);
    for (std::size_t k = 0; k < x.dim(i); ++k) vec(k, 0) = GaussRational(entry(rng));
    if (vec.is_zero()) continue;
    seed.basis[i] = vec;
    pool.add(invariant_closure(x, seed, ClosureDirection::SmallestContaining));
    Subspace hyper = Subspace::full(x.dims());
    hyper.basis[i] = kernel_basis(vec.transpose());
    pool.add(invariant_closure(x, hyper, ClosureDirection::LargestInside));
  }
  StabilityVerdict v = verdict_from_pool(pool.items(), theta, false, StabilityMethod::RandomizedSearch);
  if (v.status == StabilityStatus::Unknown && !v.certificate && opts.q) {
    if (!dq.has_loops() && solves_relation(x, *opts.q) && is_generic(dq, x.dims(), *opts.q, theta).generic) {
      v.note = "no destabilizer found; (q, theta) is generic and x solves Phi = q, so semistable would imply stable";
    }
  }
  return emit(x, theta, v);
}

StabilityVerdict check_framed_stability(const FramedRepresentation& x, const ThetaVector& theta,
                                        const StabilityOptions& opts) {
  const auto& dq = x.base.quiver();
  const std::size_t n = dq.num_vertices();
  if (theta.size() != n) throw ContractViolation("theta has wrong length");
  QVector q = opts.q ? *opts.q : QVector(n, GaussRational(1L));
  FramedExtension ext = frame(x, q, theta);
  const bool positive = std::all_of(theta.begin(), theta.end(), [](const Rational& t) { return sgn(t) > 0; });
  if (!positive) {
    StabilityOptions routed = opts;
    routed.q = ext.q;
    StabilityVerdict v = check_general_stability(ext.x, ext.theta, routed);
    v.on_extension = true;
    v.note = "theta not positive on I; routed to the general check on the extended quiver" +
             (v.note.empty() ? std::string() : "; " + v.note);
    return v;
  }

  // Seed: Ker b at every vertex of I, zero at the framing vertex.
  Subspace seed;
  for (std::size_t i = 0; i < n; ++i) seed.basis.push_back(kernel_basis(x.b[i]));
  seed.basis.emplace_back(1, 0);
  Subspace inside = invariant_closure(ext.x, seed, ClosureDirection::LargestInside);

  // Smallest invariant subspace containing Im a (framing vertex included); reported only.
  Subspace im_seed;
  for (std::size_t i = 0; i < n; ++i) im_seed.basis.push_back(column_basis(x.a[i]));
  im_seed.basis.push_back(QMatrix::identity(1));
  Subspace containing = invariant_closure(ext.x, im_seed, ClosureDirection::SmallestContaining);

  StabilityVerdict v;
  v.method = StabilityMethod::ExactFixpoint;
  v.on_extension = true;
  v.candidates = 2;
  if (inside.total_dim() == 0) {
    v.status = StabilityStatus::Stable;
  } else {
    v.status = StabilityStatus::Unstable;
    v.certificate = StabilityCertificate{inside, theta_dot(ext.theta, inside.dims())};
  }
  const bool im_a_full = containing.dims() == ext.x.dims();
  v.note = std::string("smallest B-invariant subspace containing Im a is ") + (im_a_full ? "all of V" : "proper") +
           " (does not affect stability for theta > 0)";
  return emit(ext.x, ext.theta, v);
}

bool verify_certificate(const Representation& x, const ThetaVector& theta, const StabilityVerdict& v) {
  if (!v.certificate) {
    return v.status == StabilityStatus::Stable || v.status == StabilityStatus::Unknown;
  }
  const Subspace& s = v.certificate->subspace;
  if (s.basis.size() != x.quiver().num_vertices()) return false;
  for (std::size_t i = 0; i < s.basis.size(); ++i) {
    if (s.basis[i].rows() != x.dim(i) || rank(s.basis[i]) != s.basis[i].cols()) return false;
  }
  if (!proper_nonzero(s, x.dims()) || !is_invariant(x, s)) return false;
  const Rational td = theta_dot(theta, s.dims());
  if (td != v.certificate->theta_dim) return false;
  switch (v.status) {
    case StabilityStatus::Unstable:
      return sgn(td) > 0;
    case StabilityStatus::SemistableNotStable:
      return sgn(td) == 0;
    case StabilityStatus::Unknown:
      return sgn(td) >= 0;
    case StabilityStatus::Stable:
      return false;
  }
  return false;
}

Representation associated_graded(const Representation& x, const std::vector<Subspace>& filtration,
                                 const ThetaVector& theta) {
  const auto& dq = x.quiver();
  const std::size_t n = dq.num_vertices();
  std::vector<Subspace> f;
  if (filtration.empty() || filtration.front().dims() != x.dims()) f.push_back(Subspace::full(x.dims()));
  for (const auto& s : filtration) f.push_back(s);
  if (f.back().total_dim() != 0) f.push_back(Subspace::zero(x.dims()));

  for (std::size_t k = 0; k < f.size(); ++k) {
    if (f[k].basis.size() != n) throw ContractViolation("filtration step has wrong number of components");
    std::string arrow;
    if (!is_invariant(x, f[k], &arrow)) {
      throw ContractViolation("filtration step " + std::to_string(k) + " is not invariant under arrow '" + arrow + "'");
    }
    if (sgn(theta_dot(theta, f[k].dims())) != 0) {
      throw ContractViolation("filtration step " + std::to_string(k) + " has theta.dim != 0");
    }
    if (k > 0) {
      bool smaller = f[k].total_dim() < f[k - 1].total_dim();
      for (std::size_t i = 0; i < n; ++i) smaller = smaller && contains(f[k - 1].basis[i], f[k].basis[i]);
      if (!smaller) throw ContractViolation("filtration is not strictly decreasing at step " + std::to_string(k));
    }
  }

  // Basis of V_i adapted to the filtration: complements C_k of F^{k+1} in F^k.
  std::vector<QMatrix> adapted(n);
  std::vector<std::vector<std::size_t>> block_start(n);
  for (std::size_t i = 0; i < n; ++i) {
    adapted[i] = QMatrix(x.dim(i), 0);
    for (std::size_t k = 0; k + 1 < f.size(); ++k) {
      block_start[i].push_back(adapted[i].cols());
      adapted[i] = hstack(adapted[i], complement_in(f[k + 1].basis[i], f[k].basis[i]));
    }
    block_start[i].push_back(adapted[i].cols());
  }

  std::vector<QMatrix> maps;
  for (std::size_t h = 0; h < dq.num_arrows(); ++h) {
    const auto& a = dq.arrow(h);
    QMatrix y = inverse(adapted[a.in]) * x.map(h) * adapted[a.out];
    QMatrix g(y.rows(), y.cols());
    for (std::size_t k = 0; k + 1 < f.size(); ++k) {
      const std::size_t r0 = block_start[a.in][k], r1 = block_start[a.in][k + 1];
      const std::size_t c0 = block_start[a.out][k], c1 = block_start[a.out][k + 1];
      g.set_block(r0, c0, y.block(r0, c0, r1 - r0, c1 - c0));
    }
    // Back to the ambient basis, so gr x is the block-diagonal part of x.
    maps.push_back(adapted[a.in] * g * inverse(adapted[a.out]));
  }
  return Representation(dq, x.dims(), std::move(maps));
}

}  // namespace mqv
