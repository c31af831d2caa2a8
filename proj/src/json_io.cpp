#include "mqv/json_io.hpp"

#include <cmath>

#include "mqv/generators.hpp"

namespace mqv {

namespace {

[[noreturn]] void bad(const std::string& what) { throw ContractViolation("json: " + what); }

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <typename T, typename F>
std::vector<T> per_vertex_from_json(const DoubledQuiver& dq, const Json& j, const char* what, F&& read) {
  const std::size_t n = dq.num_vertices();
  std::vector<T> out;
  if (j.is_array()) {
    if (j.size() != n) bad(std::string(what) + " has " + std::to_string(j.size()) + " entries, quiver has " + std::to_string(n));
    for (const auto& e : j) out.push_back(read(e));
    return out;
  }
  if (!j.is_object()) bad(std::string(what) + " must be an object keyed by vertex or an array");
  for (const auto& [key, _] : j.items()) {
    if (!dq.base().has_vertex(key)) bad(std::string(what) + " names unknown vertex '" + key + "'");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& name = dq.vertex_name(i);
    if (!j.contains(name)) bad(std::string(what) + " is missing vertex '" + name + "'");
    out.push_back(read(j.at(name)));
  }
  return out;
}

// Unwraps {"key": ...} unless key is itself a vertex name.
const Json& unwrap(const DoubledQuiver& dq, const Json& j, const char* key) {
  if (dq.base().has_vertex(key)) return j;
  return member_or_self(j, key);
}

template <typename T, typename F>
Json per_vertex_to_json(const DoubledQuiver& dq, const std::vector<T>& v, F&& write) {
  Json j = Json::object();
  for (std::size_t i = 0; i < v.size(); ++i) j[dq.vertex_name(i)] = write(v[i]);
  return j;
}

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  bad("expected a rational as string or integer");
}

template <typename T, typename Read>
Matrix<T> matrix_from_rows_json(const Json& j, std::size_t rows, std::size_t cols, Read&& read) {
  if (!j.is_array()) bad("matrix must be an array of rows");
  if (j.empty()) {
    if (rows != 0 && cols != 0) bad("empty matrix where " + std::to_string(rows) + "x" + std::to_string(cols) + " is expected");
    return Matrix<T>(rows, cols);
  }
  if (j.size() != rows) bad("matrix has " + std::to_string(j.size()) + " rows, expected " + std::to_string(rows));
  Matrix<T> m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const Json& row = j[r];
    if (!row.is_array() || row.size() != cols) bad("matrix row " + std::to_string(r) + " does not have " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = read(row[c]);
  }
  return m;
}

template <typename T, typename Write>
Json matrix_rows_to_json(const Matrix<T>& m, Write&& write) {
  Json j = Json::array();
  if (m.empty()) return j;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(write(m(r, c)));
    j.push_back(std::move(row));
  }
  return j;
}

template <typename T, typename Write>
Json rep_json(const BasicRepresentation<T>& x, const char* mode, Write&& write) {
  const auto& dq = x.quiver();
  Json j;
  j["quiver"] = quiver_to_json(dq);
  j["dims"] = dims_to_json(dq, x.dims());
  Json maps = Json::object();
  for (std::size_t h = 0; h < dq.num_arrows(); ++h) maps[dq.arrow(h).id] = matrix_rows_to_json(x.map(h), write);
  j["maps"] = std::move(maps);
  j["mode"] = mode;
  return j;
}

template <typename T, typename Read>
BasicRepresentation<T> rep_from(const Json& doc, Read&& read) {
  const Json& j = member_or_self(doc, "rep");
  DoubledQuiver dq = quiver_from_json(require(j, "quiver"));
  DimVector dims = dims_from_json(dq, require(j, "dims"));
  BasicRepresentation<T> x(dq, dims);
  if (j.contains("maps")) {
    const Json& maps = j.at("maps");
    if (!maps.is_object()) bad("'maps' must be an object keyed by arrow id");
    for (const auto& [id, m] : maps.items()) {
      const std::size_t h = dq.find(id);
      const auto& a = dq.arrow(h);
      x.set_map(h, matrix_from_rows_json<T>(m, x.dim(a.in), x.dim(a.out), read));
    }
  }
  return x;
}

template <typename T>
Json relation_json(const DoubledQuiver& dq, const RelationReport<T>& r) {
  Json j;
  j["exact_zero"] = r.exact_zero;
  j["max_residual"] = r.max_residual;
  Json per = Json::object();
  for (std::size_t i = 0; i < r.residual.size(); ++i) {
    Json v;
    v["max_abs"] = r.max_abs[i];
    v["residual"] = matrix_to_json(r.residual[i]);
    per[dq.vertex_name(i)] = std::move(v);
  }
  j["vertices"] = std::move(per);
  return j;
}

}  // namespace

Json scalar_to_json(const GaussRational& v) { return v.to_string(); }

GaussRational scalar_from_json(const Json& j) {
  if (j.is_number_integer()) return GaussRational(j.get<long>());
  if (j.is_string()) return GaussRational::parse(j.get<std::string>());
  bad("exact scalar must be a string like \"p/q+r/s*i\" or an integer");
}

Json complex_to_json(const Complex& v) {
  if (v.imag() == 0.0) return v.real();
  return Json::array({v.real(), v.imag()});
}

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_string()) return GaussRational::parse(j.get<std::string>()).to_complex();
  bad("float scalar must be a number, [re, im] or an exact string");
}

Json matrix_to_json(const QMatrix& m) { return matrix_rows_to_json(m, scalar_to_json); }
Json matrix_to_json(const CMatrix& m) { return matrix_rows_to_json(m, complex_to_json); }

QMatrix matrix_from_json(const Json& j, std::size_t rows, std::size_t cols) {
  return matrix_from_rows_json<GaussRational>(j, rows, cols, scalar_from_json);
}

CMatrix cmatrix_from_json(const Json& j, std::size_t rows, std::size_t cols) {
  return matrix_from_rows_json<Complex>(j, rows, cols, complex_from_json);
}

QMatrix matrix_from_json(const Json& j) {
  if (!j.is_array()) bad("matrix must be an array of rows");
  if (j.empty()) return QMatrix();
  if (!j[0].is_array()) bad("matrix rows must be arrays");
  return matrix_from_json(j, j.size(), j[0].size());
}

Json quiver_to_json(const DoubledQuiver& dq) {
  Json j;
  j["vertices"] = dq.base().vertices();
  Json arrows = Json::array();
  for (const auto& a : dq.base().arrows()) arrows.push_back({{"id", a.id}, {"out", a.out}, {"in", a.in}});
  j["arrows"] = std::move(arrows);
  j["order"] = dq.order_ids();
  return j;
}

DoubledQuiver quiver_from_json(const Json& j) {
  if (j.is_string()) return DoubledQuiver(named_quiver(j.get<std::string>()));
  std::vector<std::string> vertices;
  for (const auto& v : require(j, "vertices")) {
    if (!v.is_string()) bad("vertex names must be strings");
    vertices.push_back(v.get<std::string>());
  }
  std::vector<Arrow> arrows;
  if (j.contains("arrows")) {
    for (const auto& a : j.at("arrows")) {
      arrows.push_back({require(a, "id").get<std::string>(), require(a, "out").get<std::string>(),
                        require(a, "in").get<std::string>()});
    }
  }
  std::optional<std::vector<std::string>> order;
  if (j.contains("order") && !j.at("order").is_null()) order = j.at("order").get<std::vector<std::string>>();
  return DoubledQuiver(Quiver(std::move(vertices), std::move(arrows)), order);
}

Json dims_to_json(const DoubledQuiver& dq, const DimVector& v) {
  return per_vertex_to_json(dq, v, [](long d) { return Json(d); });
}

DimVector dims_from_json(const DoubledQuiver& dq, const Json& j) {
  return per_vertex_from_json<long>(dq, unwrap(dq, j, "dims"), "dims", [](const Json& e) {
    if (!e.is_number_integer()) bad("dimension entries must be integers");
    return e.get<long>();
  });
}

Json qvector_to_json(const DoubledQuiver& dq, const QVector& q) { return per_vertex_to_json(dq, q, scalar_to_json); }

QVector qvector_from_json(const DoubledQuiver& dq, const Json& j) {
  return per_vertex_from_json<GaussRational>(dq, unwrap(dq, j, "q"), "q", scalar_from_json);
}

Json theta_to_json(const DoubledQuiver& dq, const ThetaVector& theta) {
  return per_vertex_to_json(dq, theta, [](const Rational& r) { return Json(rational_to_string(r)); });
}

ThetaVector theta_from_json(const DoubledQuiver& dq, const Json& j) {
  return per_vertex_from_json<Rational>(dq, unwrap(dq, j, "theta"), "theta", rational_from_json);
}

Json rep_to_json(const Representation& x) { return rep_json(x, "exact", scalar_to_json); }
Json rep_to_json(const FloatRepresentation& x) { return rep_json(x, "float", complex_to_json); }

std::string rep_mode(const Json& doc) {
  const Json& j = member_or_self(doc, "rep");
  if (!j.is_object() || !j.contains("mode")) return "exact";
  std::string m = j.at("mode").get<std::string>();
  if (m != "exact" && m != "float") bad("mode must be \"exact\" or \"float\"");
  return m;
}

Representation rep_from_json(const Json& j) {
  if (rep_mode(j) != "exact") throw ModeError("an exact representation was expected, got mode \"float\"");
  return rep_from<GaussRational>(j, scalar_from_json);
}

FloatRepresentation float_rep_from_json(const Json& j) { return rep_from<Complex>(j, complex_from_json); }

Json framed_to_json(const FramedRepresentation& x) {
  const auto& dq = x.base.quiver();
  Json j = rep_to_json(x.base);
  Json f;
  f["w"] = dims_to_json(dq, x.w);
  Json a = Json::object(), b = Json::object();
  for (std::size_t i = 0; i < x.w.size(); ++i) {
    a[dq.vertex_name(i)] = matrix_to_json(x.a[i]);
    b[dq.vertex_name(i)] = matrix_to_json(x.b[i]);
  }
  f["a"] = std::move(a);
  f["b"] = std::move(b);
  j["framing"] = std::move(f);
  return j;
}

FramedRepresentation framed_from_json(const Json& doc) {
  const Json& j = member_or_self(doc, "rep");
  Representation base = rep_from_json(j);
  const auto& dq = base.quiver();
  const Json& f = require(j, "framing");
  DimVector w = dims_from_json(dq, require(f, "w"));
  FramedRepresentation x(base, w);
  for (const char* side : {"a", "b"}) {
    if (!f.contains(side)) continue;
    const Json& maps = f.at(side);
    if (!maps.is_object()) bad(std::string("framing '") + side + "' must be an object keyed by vertex");
    for (const auto& [name, m] : maps.items()) {
      const std::size_t i = dq.vertex_index(name);
      const auto v = base.dim(i), wi = static_cast<std::size_t>(w[i]);
      if (side[0] == 'a') {
        x.a[i] = matrix_from_json(m, v, wi);
      } else {
        x.b[i] = matrix_from_json(m, wi, v);
      }
    }
  }
  return x;
}

Json tuple_to_json(const LocalSystemData& d) {
  Json j;
  j["r"] = d.r;
  Json mats = Json::array();
  for (const auto& m : d.matrices) mats.push_back(matrix_to_json(m));
  j["matrices"] = std::move(mats);
  Json ladders = Json::array();
  for (const auto& l : d.ladders) {
    Json row = Json::array();
    for (const auto& xi : l) row.push_back(scalar_to_json(xi));
    ladders.push_back(std::move(row));
  }
  j["ladders"] = std::move(ladders);
  if (d.flags) {
    Json flags = Json::array();
    for (const auto& arm : *d.flags) {
      Json fa = Json::array();
      for (const auto& f : arm) fa.push_back(matrix_to_json(f));
      flags.push_back(std::move(fa));
    }
    j["flags"] = std::move(flags);
  }
  Json beta = Json::array();
  for (const auto& b : d.beta) {
    Json row = Json::array();
    for (const auto& v : b) row.push_back(rational_to_string(v));
    beta.push_back(std::move(row));
  }
  j["beta"] = std::move(beta);
  return j;
}

LocalSystemData tuple_from_json(const Json& doc) {
  const Json& j = member_or_self(doc, "tuple");
  LocalSystemData d;
  d.r = require(j, "r").get<long>();
  if (d.r < 0) bad("r must be nonnegative");
  const auto r = static_cast<std::size_t>(d.r);
  for (const auto& m : require(j, "matrices")) d.matrices.push_back(matrix_from_json(m, r, r));
  for (const auto& l : require(j, "ladders")) {
    std::vector<GaussRational> ladder;
    for (const auto& xi : l) ladder.push_back(scalar_from_json(xi));
    d.ladders.push_back(std::move(ladder));
  }
  if (d.ladders.size() != d.matrices.size()) bad("one ladder per matrix is required");
  if (j.contains("flags") && !j.at("flags").is_null()) {
    std::vector<std::vector<QMatrix>> flags;
    for (const auto& arm : j.at("flags")) {
      std::vector<QMatrix> fa;
      for (const auto& f : arm) {
        if (f.is_array() && f.empty()) {
          fa.emplace_back(r, 0);
        } else {
          if (!f.is_array() || f.size() != r || !f[0].is_array()) bad("flag bases must have r rows");
          fa.push_back(matrix_from_json(f, r, f[0].size()));
        }
      }
      flags.push_back(std::move(fa));
    }
    d.flags = std::move(flags);
  }
  if (j.contains("beta")) {
    for (const auto& b : j.at("beta")) {
      std::vector<Rational> row;
      for (const auto& v : b) row.push_back(rational_from_json(v));
      d.beta.push_back(std::move(row));
    }
  }
  return d;
}

Json subspace_to_json(const DoubledQuiver& dq, const Subspace& s) {
  Json j;
  j["dims"] = dims_to_json(dq, s.dims());
  Json basis = Json::object();
  for (std::size_t i = 0; i < s.basis.size(); ++i) basis[dq.vertex_name(i)] = matrix_to_json(s.basis[i]);
  j["basis"] = std::move(basis);
  return j;
}

Json verdict_to_json(const DoubledQuiver& dq, const StabilityVerdict& v) {
  Json j;
  j["status"] = to_string(v.status);
  j["method"] = to_string(v.method);
  j["on_extension"] = v.on_extension;
  j["candidates"] = v.candidates;
  if (v.certificate) {
    Json c = subspace_to_json(dq, v.certificate->subspace);
    c["theta_dim"] = rational_to_string(v.certificate->theta_dim);
    j["certificate"] = std::move(c);
  } else {
    j["certificate"] = nullptr;
  }
  j["note"] = v.note;
  return j;
}

Json relation_to_json(const DoubledQuiver& dq, const RelationReport<GaussRational>& r) { return relation_json(dq, r); }
Json relation_to_json(const DoubledQuiver& dq, const RelationReport<Complex>& r) { return relation_json(dq, r); }

Json convolution_to_json(const ConvolutionResult& c) {
  const auto& dq = c.x_prime.quiver();
  Json j;
  j["vertex"] = dq.vertex_name(c.vertex);
  j["rep"] = rep_to_json(c.x_prime);
  j["q"] = qvector_to_json(dq, c.q_prime);
  j["theta"] = theta_to_json(dq, c.theta_prime);
  j["dims"] = dims_to_json(dq, c.dims_prime);
  const auto& id = c.identities;
  j["identities"] = {{"tau_phi_zero", id.tau_phi_zero},
                     {"product_formula", id.product_formula},
                     {"relation", id.relation},
                     {"per_arrow_scaling", id.per_arrow_scaling},
                     {"dims_reflect", id.dims_reflect}};
  Json re = Json::array();
  for (std::size_t h : c.reoriented_arrows) re.push_back(dq.arrow(h).id);
  j["reoriented_arrows"] = std::move(re);
  return j;
}

Json trace_to_json(const ReductionTrace& t) {
  const auto& dq = t.final_rep.quiver();
  Json j;
  Json steps = Json::array();
  for (const auto& s : t.steps) {
    steps.push_back({{"vertex", dq.vertex_name(s.vertex)},
                     {"dims_before", dims_to_json(dq, s.dims_before)},
                     {"dims_after", dims_to_json(dq, s.dims_after)},
                     {"q", qvector_to_json(dq, s.q_after)},
                     {"theta", theta_to_json(dq, s.theta_after)}});
  }
  j["steps"] = std::move(steps);
  j["rep"] = rep_to_json(t.final_rep);
  j["q"] = qvector_to_json(dq, t.final_q);
  j["theta"] = theta_to_json(dq, t.final_theta);
  j["terminal"] = t.terminal;
  return j;
}

Json genericity_to_json(const DoubledQuiver& dq, const GenericityReport& g) {
  Json j;
  j["generic"] = g.generic;
  j["failure"] = g.failure;
  j["witness"] = g.witness ? dims_to_json(dq, *g.witness) : Json(nullptr);
  return j;
}

Json dimension_check_to_json(const DimensionCheck& d) {
  Json j;
  j["domain_dim"] = d.domain_dim;
  j["group_dim"] = d.group_dim;
  j["rank"] = d.rank;
  j["kernel_dim"] = d.kernel_dim;
  j["measured"] = d.measured;
  j["expected"] = d.expected;
  j["gap"] = std::isfinite(d.gap) ? Json(d.gap) : Json("inf");
  j["match"] = d.match;
  return j;
}

const Json& member_or_self(const Json& j, const std::string& key) {
  if (j.is_object() && j.contains(key)) return j.at(key);
  return j;
}

}  // namespace mqv
