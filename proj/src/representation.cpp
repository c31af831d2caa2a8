#include "mqv/representation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mqv {

FloatRepresentation to_float(const Representation& x) {
  std::vector<CMatrix> maps;
  for (const auto& m : x.maps()) maps.push_back(to_complex(m));
  return FloatRepresentation(x.quiver(), x.dims(), std::move(maps));
}

DimVector Subspace::dims() const {
  DimVector d;
  for (const auto& b : basis) d.push_back(static_cast<long>(b.cols()));
  return d;
}

Subspace Subspace::zero(const DimVector& dims) {
  Subspace s;
  for (long d : dims) s.basis.emplace_back(static_cast<std::size_t>(d), 0);
  return s;
}

Subspace Subspace::full(const DimVector& dims) {
  Subspace s;
  for (long d : dims) s.basis.push_back(QMatrix::identity(static_cast<std::size_t>(d)));
  return s;
}

Subspace Subspace::canonical() const {
  Subspace s;
  for (const auto& b : basis) s.basis.push_back(canonical_basis(b));
  return s;
}

bool in_invertibility_domain(const Representation& x) {
  const auto& dq = x.quiver();
  for (std::size_t h = 0; h < dq.num_arrows(); ++h) {
    const auto& a = dq.arrow(h);
    const QMatrix m = a.out == a.in ? x.map(h) : factor(x, h);
    if (det(m).is_zero()) return false;
  }
  return true;
}

std::vector<std::size_t> arrows_to_normalize(const DoubledQuiver& dq, std::size_t i) {
  std::vector<std::size_t> out;
  for (std::size_t h : dq.incoming(i)) {
    if (dq.arrow(h).eps < 0) out.push_back(h);
  }
  return out;
}

bool is_invariant(const Representation& x, const Subspace& s, std::string* violating_arrow) {
  const auto& dq = x.quiver();
  if (s.basis.size() != dq.num_vertices()) throw ContractViolation("subspace has wrong number of components");
  for (std::size_t h = 0; h < dq.num_arrows(); ++h) {
    const auto& a = dq.arrow(h);
    if (!contains(s.basis[a.in], x.map(h) * s.basis[a.out])) {
      if (violating_arrow != nullptr) *violating_arrow = a.id;
      return false;
    }
  }
  return true;
}

Subspace invariant_closure(const Representation& x, const Subspace& seed, ClosureDirection direction) {
  const auto& dq = x.quiver();
  const std::size_t n = dq.num_vertices();
  if (seed.basis.size() != n) throw ContractViolation("seed has wrong number of components");
  Subspace s;
  for (std::size_t i = 0; i < n; ++i) {
    if (seed.basis[i].rows() != x.dim(i)) throw ContractViolation("seed component has wrong ambient dimension");
    s.basis.push_back(column_basis(seed.basis[i]));
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      QMatrix next = s.basis[i];
      if (direction == ClosureDirection::SmallestContaining) {
        for (std::size_t h : dq.incoming(i)) next = hstack(next, x.map(h) * s.basis[dq.arrow(h).out]);
        next = column_basis(next);
      } else {
        for (std::size_t h : dq.outgoing(i)) next = intersect(next, preimage(x.map(h), s.basis[dq.arrow(h).in]));
      }
      if (next.cols() != s.basis[i].cols()) {
        changed = true;
        s.basis[i] = std::move(next);
      }
    }
  }
  return s.canonical();
}

// ---- quadratic probe ----------------------------------------------------------

std::vector<double> default_t_grid() {
  std::vector<double> t;
  for (int k = 0; k <= 8; ++k) t.push_back(std::pow(10.0, -1.0 - 0.25 * k));
  return t;
}

QuadraticProbe quadratic_approx_probe(const FloatRepresentation& x, const std::vector<double>& t_grid) {
  QuadraticProbe probe;
  const auto m = mu(x);
  std::vector<double> lx, ly;
  bool any_nonzero = false;
  for (double t : t_grid) {
    std::vector<CMatrix> scaled;
    for (const auto& a : x.maps()) scaled.push_back(a * Complex(t, 0.0));
    FloatRepresentation xt(x.quiver(), x.dims(), std::move(scaled));
    std::vector<CMatrix> p;
    try {
      p = phi(xt);
    } catch (const Error& e) {
      probe.warnings.push_back("t=" + std::to_string(t) + " skipped: " + e.what());
      continue;
    }
    double total_sq = 0.0;
    std::vector<double> per;
    for (std::size_t i = 0; i < p.size(); ++i) {
      CMatrix r = p[i] - CMatrix::identity(x.dim(i)) - m[i] * Complex(t * t, 0.0);
      double e = frobenius_norm(r);
      per.push_back(e);
      total_sq += e * e;
    }
    const double err = std::sqrt(total_sq);
    probe.t.push_back(t);
    probe.error.push_back(err);
    probe.per_vertex.push_back(per);
    if (err > 0.0) {
      any_nonzero = true;
      lx.push_back(std::log(t));
      ly.push_back(std::log(err));
    }
  }
  if (!any_nonzero) {
    probe.exact_match = true;
    probe.slope = std::numeric_limits<double>::quiet_NaN();
    return probe;
  }
  if (lx.size() < 2) {
    probe.warnings.push_back("fewer than two nonzero errors; slope undefined");
    probe.slope = std::numeric_limits<double>::quiet_NaN();
    return probe;
  }
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= static_cast<double>(lx.size());
  my /= static_cast<double>(lx.size());
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxy += (lx[k] - mx) * (ly[k] - my);
    sxx += (lx[k] - mx) * (lx[k] - mx);
  }
  probe.slope = sxy / sxx;
  return probe;
}

QuadraticProbe quadratic_approx_probe(const Representation&, const std::vector<double>&) {
  throw ModeError("quadratic_approx_probe requires float mode");
}

// ---- framing ------------------------------------------------------------------

FramedRepresentation::FramedRepresentation(Representation base_rep, DimVector w_dims)
    : base(std::move(base_rep)), w(std::move(w_dims)) {
  if (w.size() != base.quiver().num_vertices()) throw ContractViolation("framing vector has wrong length");
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] < 0) throw ContractViolation("negative framing dimension");
    a.emplace_back(base.dim(i), static_cast<std::size_t>(w[i]));
    b.emplace_back(static_cast<std::size_t>(w[i]), base.dim(i));
  }
}

FramedRepresentation::FramedRepresentation(Representation base_rep, DimVector w_dims, std::vector<QMatrix> a_maps,
                                           std::vector<QMatrix> b_maps)
    : base(std::move(base_rep)), w(std::move(w_dims)), a(std::move(a_maps)), b(std::move(b_maps)) {
  const std::size_t n = base.quiver().num_vertices();
  if (w.size() != n || a.size() != n || b.size() != n) throw ContractViolation("framing data has wrong length");
  for (std::size_t i = 0; i < n; ++i) {
    const auto wi = static_cast<std::size_t>(w[i]);
    if (w[i] < 0 || a[i].rows() != base.dim(i) || a[i].cols() != wi || b[i].rows() != wi || b[i].cols() != base.dim(i)) {
      throw ContractViolation("framing map shape mismatch at vertex '" + base.quiver().vertex_name(i) + "'");
    }
  }
}

std::string framing_arrow_name(const std::string& vertex, long k) { return "fr_" + vertex + "#" + std::to_string(k); }

namespace {

DoubledQuiver extended_quiver(const DoubledQuiver& base, const DimVector& w) {
  std::vector<std::string> vertices = base.base().vertices();
  vertices.push_back(framing_vertex_name());
  std::vector<Arrow> arrows = base.base().arrows();
  std::vector<std::string> framing;
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (long k = 1; k <= w[i]; ++k) {
      const std::string id = framing_arrow_name(base.vertex_name(i), k);
      arrows.push_back({id, framing_vertex_name(), base.vertex_name(i)});
      framing.push_back(id);
    }
  }
  std::vector<std::string> order = framing;
  for (const auto& id : base.order_ids()) order.push_back(id);
  for (const auto& id : framing) order.push_back(DoubledQuiver::reversed_id(id));
  DoubledQuiver ext(Quiver(std::move(vertices), std::move(arrows)), order);
  // carry over any reorientation of base pairs
  for (std::size_t h = 0; h < base.num_arrows(); ++h) {
    if (base.arrow(h).eps < 0 && h < base.num_arrows() / 2) ext = ext.reoriented(ext.find(base.arrow(h).id));
  }
  return ext;
}

}  // namespace

FramedExtension frame(const FramedRepresentation& x, const QVector& q, const ThetaVector& theta) {
  const auto& dq = x.base.quiver();
  const std::size_t n = dq.num_vertices();
  if (q.size() != n || theta.size() != n) throw ContractViolation("frame: parameter length mismatch");
  DimVector dims = x.base.dims();
  dims.push_back(1);
  FramedExtension ext;
  ext.x = Representation(extended_quiver(dq, x.w), dims);
  for (std::size_t h = 0; h < dq.num_arrows(); ++h) ext.x.set_map(dq.arrow(h).id, x.base.map(h));
  for (std::size_t i = 0; i < n; ++i) {
    for (long k = 1; k <= x.w[i]; ++k) {
      const std::string id = framing_arrow_name(dq.vertex_name(i), k);
      const auto col = static_cast<std::size_t>(k - 1);
      ext.x.set_map(id, x.a[i].column(col));
      ext.x.set_map(DoubledQuiver::reversed_id(id), x.b[i].row(col));
    }
  }
  ext.q = q;
  ext.theta = theta;
  GaussRational q_inf(1L);
  Rational t_inf = 0;
  for (std::size_t i = 0; i < n; ++i) {
    q_inf *= q[i].pow(-x.base.dims()[i]);
    t_inf -= theta[i] * x.base.dims()[i];
  }
  ext.q.push_back(q_inf);
  ext.theta.push_back(t_inf);
  ext.infinity = n;
  return ext;
}

FramedRepresentation unframe(const Representation& ext, const DoubledQuiver& base_quiver, const DimVector& w) {
  const std::size_t n = base_quiver.num_vertices();
  DimVector dims(ext.dims().begin(), ext.dims().begin() + static_cast<long>(n));
  Representation base(base_quiver, dims);
  for (std::size_t h = 0; h < base_quiver.num_arrows(); ++h) base.set_map(h, ext.map(base_quiver.arrow(h).id));
  FramedRepresentation fr(base, w);
  for (std::size_t i = 0; i < n; ++i) {
    for (long k = 1; k <= w[i]; ++k) {
      const std::string id = framing_arrow_name(base_quiver.vertex_name(i), k);
      const auto col = static_cast<std::size_t>(k - 1);
      fr.a[i].set_block(0, col, ext.map(id));
      fr.b[i].set_block(col, 0, ext.map(DoubledQuiver::reversed_id(id)));
    }
  }
  return fr;
}

ArmComplex arm_complex(const FramedRepresentation& x, std::size_t i) {
  const auto& dq = x.base.quiver();
  const std::size_t n = dq.num_vertices();
  FramedExtension ext = frame(x, QVector(n, GaussRational(1L)), ThetaVector(n, Rational(1)));
  SigmaTau<GaussRational> st = sigma_tau(ext.x, i, GaussRational(1L));
  ArmComplex c;
  c.sigma = st.sigma;
  c.tau = st.tau;
  c.complex_ok = (st.tau * st.sigma).is_zero();
  const std::size_t rank_sigma = rank(st.sigma);
  if (rank_sigma != x.base.dim(i)) {
    throw StabilityViolation("sigma_i is not injective at vertex '" + dq.vertex_name(i) + "' (rank " +
                             std::to_string(rank_sigma) + " < " + std::to_string(x.base.dim(i)) + ")");
  }
  const std::size_t rank_tau = rank(st.tau);
  c.corank = x.base.dim(i) - rank_tau;
  c.rank_q = static_cast<long>(st.hat_dim - rank_tau) - static_cast<long>(rank_sigma);
  RootDatum rd = root_datum_from_graph(dq);
  c.expected = rd.pair(i, rd.weight(x.w, x.base.dims())) + static_cast<long>(c.corank);
  c.rank_ok = c.rank_q == c.expected;
  return c;
}

// ---- Jacobian -----------------------------------------------------------------

CMatrix phi_jacobian(const FloatRepresentation& x) {
  const auto& dq = x.quiver();
  if (dq.has_loops()) throw LoopError("phi_jacobian is undefined on quivers with loops");
  const std::size_t n = dq.num_vertices();

  // Factors G_k = F^{eps} at each vertex with prefix/suffix products.
  struct VertexData {
    std::vector<CMatrix> g, f, f_inv, prefix, suffix;
    std::vector<std::size_t> arrows;
  };
  std::vector<VertexData> vd(n);
  std::vector<std::size_t> row_offset(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto& d = vd[i];
    for (std::size_t h : dq.incoming(i)) {
      CMatrix f = factor(x, h);
      CMatrix fi = inverse_or_domain_error(f, dq.arrow(h).id);
      d.arrows.push_back(h);
      d.g.push_back(dq.arrow(h).eps > 0 ? f : fi);
      d.f.push_back(f);
      d.f_inv.push_back(fi);
    }
    const std::size_t k = d.g.size();
    d.prefix.assign(k + 1, CMatrix::identity(x.dim(i)));
    d.suffix.assign(k + 1, CMatrix::identity(x.dim(i)));
    for (std::size_t j = 0; j < k; ++j) d.prefix[j + 1] = d.prefix[j] * d.g[j];
    for (std::size_t j = k; j-- > 0;) d.suffix[j] = d.g[j] * d.suffix[j + 1];
    row_offset[i + 1] = row_offset[i] + x.dim(i) * x.dim(i);
  }
  std::size_t cols = 0;
  for (const auto& m : x.maps()) cols += m.rows() * m.cols();
  CMatrix jac(row_offset[n], cols);

  // d(prod G) along dF at factor slot j of vertex i.
  auto add_contribution = [&](std::size_t i, std::size_t slot, const CMatrix& df, std::size_t col) {
    const auto& d = vd[i];
    const std::size_t h = d.arrows[slot];
    CMatrix dg = dq.arrow(h).eps > 0 ? df : -(d.f_inv[slot] * df * d.f_inv[slot]);
    CMatrix dphi = d.prefix[slot] * dg * d.suffix[slot + 1];
    for (std::size_t r = 0; r < dphi.rows(); ++r)
      for (std::size_t c = 0; c < dphi.cols(); ++c) jac(row_offset[i] + r * dphi.cols() + c, col) += dphi(r, c);
  };
  auto slot_of = [&](std::size_t i, std::size_t h) {
    const auto& arrows = vd[i].arrows;
    return static_cast<std::size_t>(std::find(arrows.begin(), arrows.end(), h) - arrows.begin());
  };

  std::size_t col = 0;
  for (std::size_t g = 0; g < dq.num_arrows(); ++g) {
    const auto& a = dq.arrow(g);
    const CMatrix& xg = x.map(g);
    const CMatrix& xgbar = x.map(a.partner);
    for (std::size_t r = 0; r < xg.rows(); ++r) {
      for (std::size_t c = 0; c < xg.cols(); ++c, ++col) {
        CMatrix e(xg.rows(), xg.cols());
        e(r, c) = Complex(1.0, 0.0);
        // factor of g at in(g): 1 + x_g x_gbar, derivative E x_gbar
        add_contribution(a.in, slot_of(a.in, g), e * xgbar, col);
        // factor of gbar at in(gbar) = out(g): 1 + x_gbar x_g, derivative x_gbar E
        add_contribution(a.out, slot_of(a.out, a.partner), xgbar * e, col);
      }
    }
  }
  return jac;
}

DimensionCheck jacobian_dimension_check(const FloatRepresentation& x, double tol) {
  DimensionCheck dc;
  CMatrix jac = phi_jacobian(x);
  dc.domain_dim = jac.cols();
  for (long d : x.dims()) dc.group_dim += static_cast<std::size_t>(d * d);
  std::vector<double> sv = singular_values(jac);
  dc.rank = rank_numeric(jac, tol);
  dc.kernel_dim = dc.domain_dim - dc.rank;
  dc.measured = static_cast<long>(dc.kernel_dim) - (static_cast<long>(dc.group_dim) - 1);
  dc.expected = 2 - bilinear_form(x.quiver(), x.dims(), x.dims());
  if (dc.rank == 0 || dc.rank >= sv.size()) {
    dc.gap = std::numeric_limits<double>::infinity();
  } else {
    dc.gap = sv[dc.rank] == 0.0 ? std::numeric_limits<double>::infinity() : sv[dc.rank - 1] / sv[dc.rank];
  }
  dc.match = dc.measured == dc.expected;
  return dc;
}

}  // namespace mqv
