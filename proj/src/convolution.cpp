#include "mqv/convolution.hpp"

#include <algorithm>

#include "mqv/intertwiner.hpp"

namespace mqv {

std::string to_string(Tri t) {
  switch (t) {
    case Tri::Pass:
      return "pass";
    case Tri::Fail:
      return "fail";
    case Tri::Unknown:
      return "unknown";
  }
  return "unknown";
}

namespace {

bool relation_holds(const Representation& x, const QVector& q) {
  try {
    return solves_relation(x, q);
  } catch (const DomainError&) {
    return false;
  }
}

// Selection matrix pi_h : Vhat -> V_out(h) for block k.
QMatrix projection(std::size_t hat_dim, std::size_t offset, std::size_t width) {
  QMatrix p(width, hat_dim);
  for (std::size_t r = 0; r < width; ++r) p(r, offset + r) = GaussRational(1L);
  return p;
}

}  // namespace

ConvolutionResult middle_convolve(const Representation& x, std::size_t i, const QVector& q, const ThetaVector& theta) {
  const auto& dq = x.quiver();
  const std::size_t n = dq.num_vertices();
  if (i >= n) throw ContractViolation("vertex index out of range");
  if (q.size() != n || theta.size() != n) throw ContractViolation("parameter length mismatch");
  const DimVector dims_prime = reflect_dim(dq, i, x.dims());  // LoopError at a loop
  if (!relation_holds(x, q)) throw ContractViolation("middle_convolve needs an exact solution of Phi(x) = q");
  for (long d : dims_prime) {
    if (d < 0) throw EmptinessError("s_i(dim V) has a negative entry; the reflected space is empty");
  }
  const GaussRational& qi = q[i];
  if (qi.is_one() && sgn(theta[i]) >= 0) {
    throw PreconditionFailure("q_i = 1 needs theta_i < 0 for the convolution to be defined");
  }

  ConvolutionResult res;
  res.vertex = i;
  res.reoriented_arrows = arrows_to_normalize(dq, i);
  const Representation y = reorient_all(x, res.reoriented_arrows);
  const auto& ndq = y.quiver();

  SigmaTau<GaussRational> st = sigma_tau(y, i, qi);
  if (rank(st.tau) != y.dim(i)) {
    throw PreconditionFailure("tau_i is not surjective (needed when q_i = 1, theta_i < 0: x must be theta-stable)");
  }
  const QMatrix kernel = kernel_basis(st.tau);
  res.kernel = kernel;
  const std::size_t kdim = kernel.cols();
  const GaussRational qinv = qi.inverse();
  const GaussRational diag = (GaussRational(1L) - qi) * qinv;

  // phi_h = sum_{h'<h} iota_h' x_h'bar x_h + q_i^{-1} sum_{h'>=h} iota_h' x_h'bar x_h + (1-q_i)/q_i iota_h
  std::vector<QMatrix> phis;
  for (std::size_t k = 0; k < st.arrows.size(); ++k) {
    const std::size_t h = st.arrows[k];
    const std::size_t width = y.dim(ndq.arrow(h).out);
    QMatrix ph(st.hat_dim, width);
    for (std::size_t kk = 0; kk < st.arrows.size(); ++kk) {
      const std::size_t hp = st.arrows[kk];
      QMatrix blk = y.map(ndq.arrow(hp).partner) * y.map(h);
      if (kk >= k) blk *= qinv;
      ph.set_block(st.offsets[kk], 0, blk);
    }
    QMatrix id = QMatrix::identity(width) * diag;
    ph.set_block(st.offsets[k], 0, ph.block(st.offsets[k], 0, width, width) + id);
    phis.push_back(std::move(ph));
  }

  bool tau_phi = true;
  QMatrix prod = QMatrix::identity(st.hat_dim);
  for (std::size_t k = 0; k < phis.size(); ++k) {
    tau_phi = tau_phi && (st.tau * phis[k]).is_zero();
    const std::size_t width = phis[k].cols();
    prod = prod * (QMatrix::identity(st.hat_dim) + phis[k] * projection(st.hat_dim, st.offsets[k], width));
  }
  const QMatrix rhs = QMatrix::identity(st.hat_dim) -
                      (QMatrix::scalar(st.hat_dim, qi - GaussRational(1L)) - st.sigma * st.tau) * qinv;
  res.identities.tau_phi_zero = tau_phi;
  res.identities.product_formula = prod == rhs;

  // New representation in the normalized frame.
  DimVector new_dims = x.dims();
  new_dims[i] = static_cast<long>(kdim);
  Representation yp(ndq, new_dims);
  for (std::size_t h = 0; h < ndq.num_arrows(); ++h) {
    const auto& a = ndq.arrow(h);
    if (a.in != i && a.out != i) yp.set_map(h, y.map(h));
  }
  bool scaling = true;
  for (std::size_t k = 0; k < st.arrows.size(); ++k) {
    const std::size_t h = st.arrows[k];
    const std::size_t hb = ndq.arrow(h).partner;
    const std::size_t width = phis[k].cols();
    QMatrix xh = tau_phi ? coordinates(kernel, phis[k]) : QMatrix(kdim, width);
    QMatrix xhb = kernel.block(st.offsets[k], 0, width, kdim);
    yp.set_map(h, xh);
    yp.set_map(hb, xhb);
    QMatrix lhs = QMatrix::identity(width) + xhb * xh;
    QMatrix want = (QMatrix::identity(width) + y.map(hb) * y.map(h)) * qinv;
    scaling = scaling && lhs == want;
  }
  res.identities.per_arrow_scaling = scaling;
  res.identities.dims_reflect = new_dims == dims_prime;

  res.q_prime = reflect_q(dq, i, q);
  res.theta_prime = reflect_theta(dq, i, theta);
  res.dims_prime = new_dims;
  const bool rel_normalized = relation_holds(yp, res.q_prime);
  res.x_prime = reorient_all(yp, res.reoriented_arrows);
  res.identities.relation = rel_normalized && relation_holds(res.x_prime, res.q_prime);
  return res;
}

InvolutionCertificate verify_involution(const Representation& x, std::size_t i, const QVector& q,
                                        const ThetaVector& theta, std::mt19937_64& rng, int attempts) {
  ConvolutionResult once = middle_convolve(x, i, q, theta);
  ConvolutionResult twice = middle_convolve(once.x_prime, i, once.q_prime, once.theta_prime);
  InvolutionCertificate cert;
  cert.x_double = twice.x_prime;
  const auto& dq = x.quiver();
  const std::size_t n = dq.num_vertices();
  if (twice.dims_prime != x.dims()) throw GenerationFailure("S_i^2 changed the dimension vector");

  std::vector<QMatrix> identity;
  for (std::size_t j = 0; j < n; ++j) identity.push_back(QMatrix::identity(x.dim(j)));
  UnknownShapes shapes;
  for (std::size_t j = 0; j < n; ++j) shapes.emplace_back(x.dim(j), x.dim(j));
  std::vector<LinearConstraint> cs;
  for (std::size_t h = 0; h < dq.num_arrows(); ++h) {
    const auto& a = dq.arrow(h);
    LinearConstraint c;
    c.terms.push_back({a.in, QMatrix::identity(x.dim(a.in)), x.map(h)});
    c.terms.push_back({a.out, -cert.x_double.map(h), QMatrix::identity(x.dim(a.out))});
    c.rhs = QMatrix(x.dim(a.in), x.dim(a.out));
    cs.push_back(std::move(c));
  }
  std::optional<std::vector<QMatrix>> g;
  if (satisfies(identity, cs)) {
    g = identity;
  } else {
    g = solve_sylvester_intertwiner(shapes, cs, true, rng, attempts);
  }
  if (!g) throw GenerationFailure("no invertible intertwiner between x and S_i^2(x) found within the budget");
  cert.g = *g;
  cert.verified = satisfies(cert.g, cs);
  for (const auto& m : cert.g) cert.verified = cert.verified && !det(m).is_zero();
  return cert;
}

LusztigReport check_lusztig_conditions(const Representation& x, const Representation& x_prime, std::size_t i,
                                       const QVector& q, const ThetaVector& theta, const StabilityOptions& opts) {
  LusztigReport r;
  const auto& dq = x.quiver();
  const QVector qp = reflect_q(dq, i, q);
  const ThetaVector tp = reflect_theta(dq, i, theta);

  r.r4 = in_invertibility_domain(x);
  r.r4p = in_invertibility_domain(x_prime);
  r.r5 = r.r4 && relation_holds(x, q);
  r.r5p = r.r4p && relation_holds(x_prime, qp);

  r.r1 = true;
  for (std::size_t h = 0; h < dq.num_arrows(); ++h) {
    const auto& a = dq.arrow(h);
    if (a.in != i && a.out != i && x.map(h) != x_prime.map(h)) {
      r.r1 = false;
      r.detail += "R1 differs at arrow '" + a.id + "'; ";
    }
  }

  if (r.r4 && r.r4p) {
    const auto arrows = arrows_to_normalize(dq, i);
    const Representation y = reorient_all(x, arrows);
    const Representation yp = reorient_all(x_prime, arrows);
    SigmaTau<GaussRational> st = sigma_tau(y, i, q[i]);
    SigmaTau<GaussRational> stp = sigma_tau(yp, i, qp[i]);
    const std::size_t rs = rank(stp.sigma), rt = rank(st.tau);
    const bool injective = rs == yp.dim(i);
    const bool surjective = rt == y.dim(i);
    const bool composite = st.tau.cols() == stp.sigma.rows() && (st.tau * stp.sigma).is_zero();
    r.r2 = injective && surjective && composite && rs + rt == st.hat_dim;
    if (!r.r2) r.detail += "R2: sigma' injective=" + std::to_string(injective) + ", tau surjective=" +
                           std::to_string(surjective) + ", tau sigma'=0: " + std::to_string(composite) + "; ";
    if (st.hat_dim == stp.hat_dim) {
      QMatrix lhs = st.sigma * st.tau;
      QMatrix rhs = stp.sigma * stp.tau * q[i] + QMatrix::scalar(st.hat_dim, q[i] - GaussRational(1L));
      r.r3 = lhs == rhs;
    }
  } else {
    r.detail += "R2/R3 skipped outside the invertibility domain; ";
  }

  auto stability = [&](const Representation& rep, const ThetaVector& th) {
    try {
      StabilityVerdict v = check_general_stability(rep, th, opts);
      if (v.status == StabilityStatus::Stable) return Tri::Pass;
      if (v.status == StabilityStatus::Unknown) return Tri::Unknown;
      return Tri::Fail;
    } catch (const ContractViolation&) {
      return Tri::Unknown;
    }
  };
  r.r6 = stability(x, theta);
  r.r6p = stability(x_prime, tp);
  return r;
}

ReductionTrace reduce_dimension_vector(const Representation& x, const QVector& q, const ThetaVector& theta,
                                       int max_steps) {
  ReductionTrace trace;
  trace.final_rep = x;
  trace.final_q = q;
  trace.final_theta = theta;
  const auto& dq = x.quiver();
  const std::size_t n = dq.num_vertices();
  for (int step = 0; step < max_steps; ++step) {
    bool candidate_seen = false;
    bool applied = false;
    for (std::size_t i = 0; i < n && !applied; ++i) {
      if (dq.has_loop_at(i)) continue;
      if (bilinear_form(dq, trace.final_rep.dims(), unit_vector(n, i)) <= 0) continue;
      const DimVector next = reflect_dim(dq, i, trace.final_rep.dims());
      if (*std::min_element(next.begin(), next.end()) < 0) continue;
      candidate_seen = true;
      try {
        ConvolutionResult c = middle_convolve(trace.final_rep, i, trace.final_q, trace.final_theta);
        trace.steps.push_back({i, trace.final_rep.dims(), c.dims_prime, c.q_prime, c.theta_prime});
        trace.final_rep = c.x_prime;
        trace.final_q = c.q_prime;
        trace.final_theta = c.theta_prime;
        applied = true;
      } catch (const PreconditionFailure&) {
        continue;
      }
    }
    if (!applied) {
      trace.terminal = candidate_seen ? "stalled: no admissible convolution at a vertex with (dims, e_i) > 0"
                                      : "minimal: no loop-free vertex lowers the dimension vector";
      return trace;
    }
  }
  trace.terminal = "max_steps reached";
  return trace;
}

}  // namespace mqv
