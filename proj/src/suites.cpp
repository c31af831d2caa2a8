#include "mqv/suites.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

#include "mqv/convolution.hpp"
#include "mqv/generators.hpp"
#include "mqv/intertwiner.hpp"
#include "mqv/linalg.hpp"

namespace mqv {

namespace {

struct Shape {
  std::string quiver;
  DimVector dims;
};

std::string fmt(const DimVector& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < v.size(); ++k) os << (k ? "," : "") << v[k];
  os << ')';
  return os.str();
}

std::string label_of(const Shape& s) { return s.quiver + " " + fmt(s.dims); }

/// Collects failed checks of one instance.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failed_.push_back(what);
  }
  bool ok() const { return failed_.empty(); }
  std::string detail() const {
    std::string s;
    for (const auto& f : failed_) s += (s.empty() ? "" : "; ") + f;
    return s;
  }

 private:
  std::vector<std::string> failed_;
};

using InstanceFn = std::function<void(std::mt19937_64&, InstanceResult&, Checks&, std::size_t)>;

GeneratedSolution solution_for(const Shape& s, std::mt19937_64& rng) {
  if (s.quiver == "affine-D4") return generate_star_solution(4, rng);
  return generate_by_reflection(DoubledQuiver(named_quiver(s.quiver)), s.dims, rng);
}

bool nonnegative(const DimVector& v) {
  return std::all_of(v.begin(), v.end(), [](long d) { return d >= 0; });
}

// ---- 1 --------------------------------------------------------------------

void det_identity(std::mt19937_64& rng, InstanceResult& r, Checks& c, std::size_t id) {
  static const std::vector<Shape> shapes{{"A2", {2, 2}},       {"A3", {1, 2, 1}},        {"D4", {2, 1, 1, 1}},
                                         {"affine-A3", {2, 1, 1}}, {"star:2,1", {2, 1, 1, 1}}};
  const Shape& s = shapes[id % shapes.size()];
  r.label = label_of(s);
  Representation x = random_in_domain(DoubledQuiver(named_quiver(s.quiver)), s.dims, rng);
  GaussRational prod(1L);
  for (const auto& p : phi(x)) prod *= det(p);
  c.expect(prod.is_one(), "prod det Phi_i = " + prod.to_string());
}

// ---- 2 --------------------------------------------------------------------

const std::vector<Shape>& solution_shapes() {
  static const std::vector<Shape> shapes{
      {"A3", {1, 1, 1}}, {"D4", {1, 2, 1, 1}}, {"E6", {1, 1, 1, 1, 1, 0}}, {"affine-D4", {2, 1, 1, 1, 1}}};
  return shapes;
}

void sigma_tau_contract(std::mt19937_64& rng, InstanceResult& r, Checks& c, std::size_t id) {
  const Shape& s = solution_shapes()[id % solution_shapes().size()];
  r.label = label_of(s);
  GeneratedSolution g = solution_for(s, rng);
  c.expect(solves_relation(g.x, g.q), "generated x does not solve Phi = q");
  for (std::size_t i = 0; i < g.x.quiver().num_vertices(); ++i) {
    auto st = sigma_tau(g.x, i, g.q[i]);
    c.expect(st.tau * st.sigma == QMatrix::scalar(g.x.dim(i), g.q[i] - GaussRational(1L)),
             "tau sigma != q - 1 at vertex " + g.x.quiver().vertex_name(i));
  }
}

// ---- 3 --------------------------------------------------------------------

void convolution_identities(std::mt19937_64& rng, InstanceResult& r, Checks& c, std::size_t id) {
  static const std::vector<Shape> shapes{
      {"A3", {1, 1, 1}}, {"D4", {1, 2, 1, 1}}, {"A4", {1, 1, 1, 0}}, {"affine-D4", {2, 1, 1, 1, 1}}};
  const Shape& s = shapes[id % shapes.size()];
  GeneratedSolution g = solution_for(s, rng);
  const auto& dq = g.x.quiver();
  c.expect(check_general_stability(g.x, g.theta).status == StabilityStatus::Stable, "input is not theta-stable");
  std::vector<std::size_t> admissible;
  for (std::size_t i = 0; i < dq.num_vertices(); ++i) {
    if (!g.q[i].is_one() && nonnegative(reflect_dim(dq, i, g.x.dims()))) admissible.push_back(i);
  }
  c.expect(!admissible.empty(), "no vertex with q_i != 1 and s_i(dims) >= 0");
  std::string used;
  for (std::size_t i : admissible) {
    used += (used.empty() ? "" : ",") + dq.vertex_name(i);
    ConvolutionResult cr = middle_convolve(g.x, i, g.q, g.theta);
    const std::string at = " at " + dq.vertex_name(i);
    const auto& ids = cr.identities;
    c.expect(ids.tau_phi_zero, "tau phi_h != 0" + at);
    c.expect(ids.product_formula, "product formula fails" + at);
    c.expect(ids.relation, "Phi(x') != u_i(q)" + at);
    c.expect(ids.per_arrow_scaling, "per-arrow scaling fails" + at);
    c.expect(cr.dims_prime == reflect_dim(dq, i, g.x.dims()), "dims' != s_i(dims)" + at);
    c.expect(cr.q_prime == reflect_q(dq, i, g.q), "q' != u_i(q)" + at);
    c.expect(solves_relation(cr.x_prime, reflect_q(dq, i, g.q)), "x' does not solve Phi = u_i(q)" + at);
  }
  r.label = label_of(s) + " at " + used;
}

// ---- 4 --------------------------------------------------------------------

void involution(std::mt19937_64& rng, InstanceResult& r, Checks& c, std::size_t id) {
  static const std::vector<Shape> shapes{
      {"A2", {1, 1}}, {"A3", {1, 1, 1}}, {"D4", {1, 2, 1, 1}}, {"affine-D4", {2, 1, 1, 1, 1}}};
  const Shape& s = shapes[id % shapes.size()];
  GeneratedSolution g = solution_for(s, rng);
  const auto& dq = g.x.quiver();
  std::vector<std::size_t> choices;
  for (std::size_t i = 0; i < dq.num_vertices(); ++i) {
    if (!g.q[i].is_one()) choices.push_back(i);
  }
  if (choices.empty()) {
    c.expect(false, "no vertex with q_i != 1");
    return;
  }
  const std::size_t i = choices[std::uniform_int_distribution<std::size_t>(0, choices.size() - 1)(rng)];
  r.label = label_of(s) + " at " + dq.vertex_name(i);
  InvolutionCertificate cert = verify_involution(g.x, i, g.q, g.theta, rng);
  c.expect(cert.verified, "certificate not verified");
  c.expect(cert.x_double.dims() == g.x.dims(), "S_i^2 changed dims");
  for (std::size_t j = 0; j < dq.num_vertices(); ++j) c.expect(!det(cert.g[j]).is_zero(), "g is singular at " + dq.vertex_name(j));
  for (std::size_t h = 0; h < dq.num_arrows(); ++h) {
    const auto& a = dq.arrow(h);
    c.expect(cert.g[a.in] * g.x.map(h) == cert.x_double.map(h) * cert.g[a.out], "g does not intertwine at " + a.id);
  }
}

// ---- 5 --------------------------------------------------------------------

std::vector<LinearConstraint> iso_constraints(const Representation& x, const Representation& y) {
  std::vector<LinearConstraint> cs;
  const auto& dq = x.quiver();
  for (std::size_t h = 0; h < dq.num_arrows(); ++h) {
    const auto& a = dq.arrow(h);
    cs.push_back({{{a.in, QMatrix::identity(x.dim(a.in)), x.map(h)}, {a.out, -y.map(h), QMatrix::identity(x.dim(a.out))}},
                  QMatrix(x.dim(a.in), x.dim(a.out))});
  }
  return cs;
}

void star_dictionary(std::mt19937_64& rng, InstanceResult& r, Checks& c, std::size_t id) {
  const int n = 3 + static_cast<int>(id % 3);
  LocalSystemData d = generate_star_tuple(n, rng);
  r.label = "rank 2, " + std::to_string(n) + " matrices";
  c.expect(d.product_is_one(), "A_1...A_n != 1");

  auto [sq, x] = tuple_to_rep(d);
  const std::size_t center = sq.center();
  RelationReport<GaussRational> rel = check_relation(x, star_q(sq, d.ladders));
  c.expect(rel.exact_zero, "rebuilt x does not solve Phi = q");
  c.expect(rel.residual[center].is_zero(), "center relation fails although the product is one");

  RepToTupleResult back = rep_to_tuple(sq, x, d.ladders, true);
  c.expect(back.data.matrices == d.matrices, "rep_to_tuple(tuple_to_rep(d)) changed the matrices");
  c.expect(back.containments, "containments: " + back.detail);
  c.expect(back.flag_dims, "flag dims: " + back.detail);

  // Ladder containments and flag dimensions, recomputed here.
  for (std::size_t i = 0; i < d.n(); ++i) {
    const auto& flags = (*back.data.flags)[i];
    const auto& ladder = d.ladders[i];
    const QMatrix& a = d.matrices[i];
    const std::size_t r2 = static_cast<std::size_t>(d.r);
    QMatrix prod = QMatrix::identity(r2);
    QMatrix prev = QMatrix::identity(r2);
    for (std::size_t j = 0; j < flags.size(); ++j) {
      const QMatrix shifted_prev = a - QMatrix::scalar(r2, ladder[j]);
      prod = prod * shifted_prev;
      c.expect(rank(flags[j]) == rank(prod), "dim F^" + std::to_string(j + 1) + " != v_{i,j} on arm " + std::to_string(i + 1));
      c.expect(contains(flags[j], shifted_prev * prev), "(A - xi_j) F^j not in F^{j+1} on arm " + std::to_string(i + 1));
      prev = flags[j];
    }
    if (!flags.empty()) {
      QMatrix last = (a - QMatrix::scalar(r2, ladder[flags.size()])) * flags.back();
      c.expect(last.is_zero(), "(A - xi_l) F^l != 0 on arm " + std::to_string(i + 1));
    }
  }

  // tuple_to_rep(rep_to_tuple(g.x)) is isomorphic to g.x.
  Representation y = act(random_group_element(rng, x.dims()), x);
  RepToTupleResult from_y = rep_to_tuple(sq, y, d.ladders, true);
  auto [sq2, y2] = tuple_to_rep(from_y.data);
  UnknownShapes shapes;
  for (long v : y.dims()) shapes.emplace_back(v, v);
  c.expect(solve_sylvester_intertwiner(shapes, iso_constraints(y, y2), true, rng, 32).has_value(),
           "rebuilt representation is not isomorphic to the input");

  // Center relation <=> product one, on random data where both usually fail.
  Representation z = random_in_domain(sq.dq, x.dims(), rng);
  QMatrix product = QMatrix::identity(static_cast<std::size_t>(d.r));
  for (int i = 1; i <= sq.arms(); ++i) {
    const std::size_t ai = sq.a(i, 0), bi = sq.b(i, 0);
    product = product * (d.ladders[i - 1][0] * (QMatrix::identity(product.rows()) + z.map(ai) * z.map(bi)));
  }
  const bool center_ok = (phi_at(z, center) - QMatrix::scalar(z.dim(center), star_q(sq, d.ladders)[center])).is_zero();
  c.expect(center_ok == product.is_identity(), "center relation and product-one disagree on random data");
}

// ---- 6 --------------------------------------------------------------------

void jacobian_dimension(std::mt19937_64& rng, InstanceResult& r, Checks& c, std::size_t id) {
  static const std::vector<Shape> shapes{{"affine-D4", {2, 1, 1, 1, 1}}, {"A3", {1, 1, 1}}, {"D4", {1, 2, 1, 1}}};
  const Shape& s = shapes[id % shapes.size()];
  r.label = label_of(s);
  DoubledQuiver dq(named_quiver(s.quiver));
  std::optional<GeneratedSolution> g;
  for (int attempt = 0; attempt < 16 && !g; ++attempt) {
    GeneratedSolution cand = solution_for(s, rng);
    if (is_generic(dq, cand.x.dims(), cand.q, cand.theta).generic) g = std::move(cand);
  }
  if (!g) {
    c.expect(false, "no generic parameters within 16 draws");
    return;
  }
  c.expect(check_general_stability(g->x, g->theta).status == StabilityStatus::Stable, "solution is not theta-stable");
  DimensionCheck dc = jacobian_dimension_check(to_float(g->x), 1e-9);
  const long expected = 2 - bilinear_form(dq, s.dims, s.dims);
  c.expect(dc.expected == expected, "expected dimension mismatch");
  c.expect(dc.measured == expected,
           "dim Ker dPhi - (dim G - 1) = " + std::to_string(dc.measured) + ", expected " + std::to_string(expected));
  c.expect(dc.gap >= 1e3, "singular value gap " + std::to_string(dc.gap) + " < 1e3");
  r.label += " measured " + std::to_string(dc.measured);
}

// ---- 7 --------------------------------------------------------------------

void quadratic_probe(std::mt19937_64& rng, InstanceResult& r, Checks& c, std::size_t id) {
  static const std::vector<Shape> shapes{{"A2", {2, 2}}, {"A3", {1, 2, 1}}, {"D4", {1, 2, 1, 1}}, {"affine-A3", {2, 1, 2}}};
  const Shape& s = shapes[id % shapes.size()];
  FloatRepresentation x = random_float_representation(DoubledQuiver(named_quiver(s.quiver)), s.dims, rng);
  QuadraticProbe p = quadratic_approx_probe(x, default_t_grid());
  std::ostringstream os;
  os << label_of(s) << " slope " << p.slope;
  r.label = os.str();
  c.expect(!p.exact_match, "error vanished identically");
  c.expect(p.slope >= 3.7 && p.slope <= 4.3, "slope outside [3.7, 4.3]");
}

// ---- 8 --------------------------------------------------------------------

void framed_rank(std::mt19937_64& rng, InstanceResult& r, Checks& c, std::size_t id) {
  static const std::vector<Shape> framings{{"A1", {2}},    {"A2", {1, 0}},       {"A2", {1, 1}},
                                           {"A3", {0, 1, 0}}, {"A3", {1, 0, 1}}, {"D4", {0, 1, 0, 0}}};
  const Shape& s = framings[id % framings.size()];
  DoubledQuiver dq(named_quiver(s.quiver));
  FramedSolution f = generate_framed_q1(dq, s.dims, rng);
  const DimVector& v = f.x.base.dims();
  r.label = s.quiver + " w=" + fmt(s.dims) + " v=" + fmt(v);
  c.expect(total(v) > 0, "growth produced v = 0");
  const std::size_t n = dq.num_vertices();
  FramedExtension ext = frame(f.x, QVector(n, GaussRational(1L)), f.theta);
  c.expect(solves_relation(ext.x, ext.q), "framed x does not solve Phi = 1");
  c.expect(check_framed_stability(f.x, f.theta).status == StabilityStatus::Stable, "x is not framed-stable");
  RootDatum rd = root_datum_from_graph(dq);
  for (std::size_t i = 0; i < n; ++i) {
    ArmComplex ac = arm_complex(f.x, i);
    const std::string at = " at " + dq.vertex_name(i);
    c.expect(rank(ac.sigma) == f.x.base.dim(i), "sigma not injective" + at);
    c.expect(ac.complex_ok, "tau sigma != 0" + at);
    long pairing = s.dims[i];
    for (std::size_t j = 0; j < n; ++j) pairing -= rd.cartan[i][j] * v[j];
    const long corank = static_cast<long>(f.x.base.dim(i)) - static_cast<long>(rank(ac.tau));
    const long rank_q = static_cast<long>(kernel_basis(ac.tau).cols()) - static_cast<long>(rank(ac.sigma));
    c.expect(rank_q == pairing + corank, "rank Q = " + std::to_string(rank_q) + " != <h_i, w - v> + n = " +
                                             std::to_string(pairing + corank) + at);
    c.expect(ac.rank_ok && ac.rank_q == rank_q, "library rank report disagrees" + at);
  }
}

// ---- 9 --------------------------------------------------------------------

void stability_crossval(std::mt19937_64& rng, InstanceResult& r, Checks& c, std::size_t id) {
  static const std::vector<std::string> quivers{"A1", "A2", "A3", "affine-A2"};
  DoubledQuiver dq(named_quiver(quivers[id % quivers.size()]));
  const std::size_t n = dq.num_vertices();
  std::uniform_int_distribution<long> vd(0, 2), wd(0, 2), td(1, 4);
  DimVector v(n), w(n);
  do {
    for (auto& e : v) e = vd(rng);
  } while (total(v) > 5);
  for (auto& e : w) e = wd(rng);
  ThetaVector theta;
  for (std::size_t i = 0; i < n; ++i) theta.push_back(ratio(td(rng), std::uniform_int_distribution<long>(1, 3)(rng)));
  FramedRepresentation x = random_framed(dq, v, w, rng, 0.6);
  r.label = quivers[id % quivers.size()] + " v=" + fmt(v) + " w=" + fmt(w);

  StabilityVerdict framed = check_framed_stability(x, theta);
  FramedExtension ext = frame(x, QVector(n, GaussRational(1L)), theta);
  StabilityVerdict tiny = check_general_stability(ext.x, ext.theta);
  r.label += " " + to_string(framed.status);
  c.expect(tiny.method == StabilityMethod::ExhaustiveTiny, "extension did not use the exhaustive tier");
  c.expect(framed.status == tiny.status, "framed says " + to_string(framed.status) + ", exhaustive says " + to_string(tiny.status));
  if (framed.certificate) {
    c.expect(framed.on_extension && verify_certificate(ext.x, ext.theta, framed), "framed certificate does not verify");
  }
  if (tiny.certificate) c.expect(verify_certificate(ext.x, ext.theta, tiny), "exhaustive certificate does not verify");
}

// ---- 10 -------------------------------------------------------------------

void reflection_dualities(std::mt19937_64& rng, InstanceResult& r, Checks& c, std::size_t id) {
  static const std::vector<std::string> quivers{"A3", "D4", "affine-A3", "affine-D4", "E6", "star:2,2"};
  DoubledQuiver dq(named_quiver(quivers[id % quivers.size()]));
  const std::size_t n = dq.num_vertices();
  std::uniform_int_distribution<long> ad(-2, 4), tn(-6, 6), td(1, 4);
  DimVector a(n);
  ThetaVector theta(n);
  QVector q(n);
  for (std::size_t j = 0; j < n; ++j) {
    a[j] = ad(rng);
    theta[j] = ratio(tn(rng), td(rng));
    q[j] = random_small_rational(rng);
    if (rng() % 4 == 0) q[j] = q[j] * GaussRational(Rational(1), Rational(1));
  }
  const std::size_t i = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  r.label = quivers[id % quivers.size()] + " i=" + dq.vertex_name(i) + " alpha=" + fmt(a);
  const DimVector sa = reflect_dim(dq, i, a);
  const ThetaVector rt = reflect_theta(dq, i, theta);
  const QVector uq = reflect_q(dq, i, q);
  c.expect(theta_dot(theta, sa) == theta_dot(rt, a), "theta.s_i(alpha) != r_i(theta).alpha");
  c.expect(q_power(q, sa) == q_power(uq, a), "q^{s_i(alpha)} != u_i(q)^alpha");
  c.expect(reflect_dim(dq, i, sa) == a, "s_i is not an involution");
  c.expect(reflect_theta(dq, i, rt) == theta, "r_i is not an involution");
  c.expect(reflect_q(dq, i, uq) == q, "u_i is not an involution");
}

// ---- catalog ----------------------------------------------------------------

struct SuiteEntry {
  SuiteInfo info;
  InstanceFn fn;
};

const std::vector<SuiteEntry>& entries() {
  static const std::vector<SuiteEntry> e{
      {{"det-identity", 50, "prod_i det Phi_i(x) = 1 on random in-domain representations"}, det_identity},
      {{"sigma-tau", 80, "tau_i sigma_i = q_i - 1 at generated solutions, every vertex"}, sigma_tau_contract},
      {{"convolution-identities", 20, "middle convolution identities and dims' = s_i(dims)"}, convolution_identities},
      {{"involution", 12, "S_i^2(x) is isomorphic to x via an exact invertible intertwiner"}, involution},
      {{"star-dictionary", 10, "tuple <-> star representation round trip, product one, ladder containments"},
       star_dictionary},
      {{"jacobian-dimension", 6, "numeric Jacobian rank gives dimension 2 - (v, v)"}, jacobian_dimension},
      {{"quadratic-probe", 10, "Phi(tx) - 1 - t^2 mu(x) decays with slope 4"}, quadratic_probe},
      {{"framed-rank", 12, "rank Q_i = <h_i, w - v> + corank tau_i at framed-stable points"}, framed_rank},
      {{"stability-crossval", 200, "framed criterion agrees with exhaustive search on the extension"},
       stability_crossval},
      {{"reflection-dualities", 100, "dualities and involutivity of s_i, r_i, u_i"}, reflection_dualities},
  };
  return e;
}

}  // namespace

std::size_t SuiteReport::failures() const {
  return static_cast<std::size_t>(std::count_if(instances.begin(), instances.end(), [](const auto& i) { return !i.passed; }));
}

const std::vector<SuiteInfo>& suite_catalog() {
  static const std::vector<SuiteInfo> infos = [] {
    std::vector<SuiteInfo> v;
    for (const auto& e : entries()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

SuiteReport run_suite(const std::string& name, std::uint64_t seed, std::size_t count, unsigned threads) {
  auto it = std::find_if(entries().begin(), entries().end(), [&](const auto& e) { return e.info.name == name; });
  if (it == entries().end()) throw UnknownSuite("unknown suite '" + name + "'");
  SuiteReport rep;
  rep.name = name;
  rep.seed = seed;
  rep.count = count;
  if (count == 0) {
    rep.warnings.push_back("count is 0: the suite passes vacuously");
    return rep;
  }
  rep.instances.resize(count);
  const InstanceFn& fn = it->fn;
  auto run_one = [&](std::size_t k) {
    InstanceResult& res = rep.instances[k];
    res.id = k;
    std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(k)};
    std::mt19937_64 rng(ss);
    Checks checks;
    try {
      fn(rng, res, checks, k);
      res.passed = checks.ok();
      res.detail = checks.detail();
    } catch (const std::exception& e) {
      res.passed = false;
      res.detail = checks.detail() + (checks.ok() ? "" : "; ") + "error: " + e.what();
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < count; k = next++) run_one(k);
    });
  }
  for (auto& t : pool) t.join();
  return rep;
}

Json suite_report_to_json(const SuiteReport& r) {
  Json j;
  j["suite"] = r.name;
  j["seed"] = r.seed;
  j["count"] = r.count;
  j["passed"] = r.passed();
  j["failures"] = r.failures();
  j["warnings"] = r.warnings;
  Json inst = Json::array();
  for (const auto& i : r.instances) {
    inst.push_back({{"id", i.id}, {"passed", i.passed}, {"label", i.label}, {"detail", i.detail}});
  }
  j["instances"] = std::move(inst);
  return j;
}

}  // namespace mqv
