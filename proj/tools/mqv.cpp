// mqv: command-line workbench. JSON in (files or "-" for stdin), JSON out.
// Exit codes: 0 pass, 1 property failure, 2 usage or contract error.
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mqv/convolution.hpp"
#include "mqv/generators.hpp"
#include "mqv/json_io.hpp"
#include "mqv/suites.hpp"

using namespace mqv;

namespace {

constexpr int kPass = 0;
constexpr int kPropertyFailure = 1;
constexpr int kUsageError = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json read_json(const std::string& path) {
  if (path == "-") return Json::parse(std::cin);
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return Json::parse(in);
}

struct Output {
  std::string path = "-";
  void write(const Json& j) const {
    if (path == "-") {
      std::cout << j.dump(2) << '\n';
      return;
    }
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
  }
};

std::size_t vertex_arg(const DoubledQuiver& dq, const std::string& v) {
  if (dq.base().has_vertex(v)) return dq.vertex_index(v);
  throw ContractViolation("unknown vertex '" + v + "'");
}

/// The quiver from --quiver FILE (quiver or representation document) or --named NAME.
DoubledQuiver quiver_arg(const std::string& file, const std::string& named) {
  if (!named.empty()) return DoubledQuiver(named_quiver(named));
  if (file.empty()) throw UsageError("one of --quiver or --named is required");
  return quiver_from_json(member_or_self(member_or_self(read_json(file), "rep"), "quiver"));
}

/// The document for a parameter: its own file when given, else the representation document.
Json param_doc(const std::string& file, const Json& rep_doc, const char* key) {
  if (!file.empty()) return read_json(file);
  if (rep_doc.is_object() && rep_doc.contains(key)) return rep_doc;
  throw UsageError(std::string("--") + key + " is required (the representation file carries no \"" + key + "\")");
}

std::vector<std::vector<GaussRational>> ladders_from_json(const Json& doc) {
  const Json& j = member_or_self(doc, "ladders");
  std::vector<std::vector<GaussRational>> out;
  for (const auto& l : j) {
    std::vector<GaussRational> row;
    for (const auto& xi : l) row.push_back(scalar_from_json(xi));
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<int> arms_of(const std::vector<std::vector<GaussRational>>& ladders) {
  std::vector<int> arms;
  for (const auto& l : ladders) {
    if (l.empty()) throw ContractViolation("each ladder needs at least xi_0");
    arms.push_back(static_cast<int>(l.size()) - 1);
  }
  return arms;
}

/// The same maps placed on build_star(arms), matched by vertex and arrow names.
Representation on_star(const StarQuiver& sq, const Representation& x) {
  const auto& dq = x.quiver();
  if (dq.base().vertices() != sq.dq.base().vertices()) throw ContractViolation("representation is not on the star quiver of the ladders");
  Representation y(sq.dq, x.dims());
  for (std::size_t h = 0; h < dq.num_arrows(); ++h) y.set_map(dq.arrow(h).id, x.map(h));
  return y;
}

int error_exit(const char* kind, const std::string& msg) {
  Json e;
  e["error"] = kind;
  e["message"] = msg;
  std::cerr << e.dump(2) << '\n';
  return kUsageError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mqv: multiplicative quiver variety workbench"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string mode = "exact";
  Output out;
  app.add_option("--mode", mode, "Arithmetic mode")->check(CLI::IsMember({"exact", "float"}));
  app.add_option("-o,--out", out.path, "Output file, '-' for stdout");

  std::string rep_file, q_file, theta_file, quiver_file, named, dim_file, tuple_file, ladders_file, seeds_file, vertex;
  int budget = 256, max_steps = 64;
  long tiny_bound = 6;
  bool framed = false, verify_inv = false, assume_stable = false;
  double tol = 1e-9;
  std::uint64_t seed = 0;

  int rc = kPass;

  auto* relation = app.add_subcommand("relation", "Residual of Phi(x) = q per vertex");
  relation->add_option("--rep", rep_file, "Representation JSON")->required();
  relation->add_option("--q", q_file, "q vector JSON (default: \"q\" in the representation file)");
  relation->add_option("--tol", tol, "Float mode: residual threshold");
  relation->callback([&] {
    Json doc = read_json(rep_file);
    Json qdoc = param_doc(q_file, doc, "q");
    if (mode == "float" || rep_mode(doc) == "float") {
      FloatRepresentation x = float_rep_from_json(doc);
      std::vector<Complex> q;
      for (const auto& v : qvector_from_json(x.quiver(), qdoc)) q.push_back(v.to_complex());
      auto r = check_relation(x, q);
      Json j = relation_to_json(x.quiver(), r);
      j["pass"] = r.max_residual <= tol;
      out.write(j);
      rc = r.max_residual <= tol ? kPass : kPropertyFailure;
    } else {
      Representation x = rep_from_json(doc);
      auto r = check_relation(x, qvector_from_json(x.quiver(), qdoc));
      Json j = relation_to_json(x.quiver(), r);
      j["pass"] = r.exact_zero;
      out.write(j);
      rc = r.exact_zero ? kPass : kPropertyFailure;
    }
  });

  auto* stability = app.add_subcommand("stability", "theta-(semi)stability verdict with certificate");
  stability->add_option("--rep", rep_file, "Representation JSON (with \"framing\" for --framed)")->required();
  stability->add_option("--theta", theta_file, "theta JSON (default: \"theta\" in the representation file)");
  stability->add_flag("--framed", framed, "Use the framed criterion");
  stability->add_option("--budget", budget, "Random seeds for the randomized tier");
  stability->add_option("--tiny-bound", tiny_bound, "Largest total dimension for exhaustive search");
  stability->add_option("--seed", seed, "Seed for the randomized tier");
  stability->callback([&] {
    if (mode == "float") throw ModeError("stability is exact-only");
    Json doc = read_json(rep_file);
    StabilityOptions opts;
    opts.budget = budget;
    opts.tiny_bound = tiny_bound;
    if (seed) opts.seed = seed;
    if (framed) {
      FramedRepresentation x = framed_from_json(doc);
      const auto& dq = x.base.quiver();
      ThetaVector theta = theta_from_json(dq, param_doc(theta_file, doc, "theta"));
      StabilityVerdict v = check_framed_stability(x, theta, opts);
      FramedExtension ext = frame(x, QVector(dq.num_vertices(), GaussRational(1L)), theta);
      out.write(verdict_to_json(v.on_extension ? ext.x.quiver() : dq, v));
    } else {
      Representation x = rep_from_json(doc);
      ThetaVector theta = theta_from_json(x.quiver(), param_doc(theta_file, doc, "theta"));
      if (doc.contains("q")) opts.q = qvector_from_json(x.quiver(), doc);
      out.write(verdict_to_json(x.quiver(), check_general_stability(x, theta, opts)));
    }
  });

  auto* convolve = app.add_subcommand("convolve", "Middle convolution S_i");
  convolve->add_option("--rep", rep_file, "Representation JSON")->required();
  convolve->add_option("--vertex", vertex, "Vertex name")->required();
  convolve->add_option("--q", q_file, "q vector JSON");
  convolve->add_option("--theta", theta_file, "theta JSON");
  convolve->add_flag("--verify-involution", verify_inv, "Also certify S_i^2(x) = x up to isomorphism");
  convolve->add_option("--seed", seed, "Seed for the intertwiner search");
  convolve->callback([&] {
    if (mode == "float") throw ModeError("convolve is exact-only");
    Json doc = read_json(rep_file);
    Representation x = rep_from_json(doc);
    const auto& dq = x.quiver();
    QVector q = qvector_from_json(dq, param_doc(q_file, doc, "q"));
    ThetaVector theta = theta_from_json(dq, param_doc(theta_file, doc, "theta"));
    const std::size_t i = vertex_arg(dq, vertex);
    ConvolutionResult c = middle_convolve(x, i, q, theta);
    Json j = convolution_to_json(c);
    bool ok = c.identities.all();
    if (verify_inv) {
      std::mt19937_64 rng(seed);
      InvolutionCertificate cert = verify_involution(x, i, q, theta, rng);
      Json g = Json::object();
      for (std::size_t k = 0; k < cert.g.size(); ++k) g[dq.vertex_name(k)] = matrix_to_json(cert.g[k]);
      j["involution"] = {{"verified", cert.verified}, {"intertwiner", g}};
      ok = ok && cert.verified;
    }
    out.write(j);
    rc = ok ? kPass : kPropertyFailure;
  });

  auto* reduce = app.add_subcommand("reduce", "Reduce the dimension vector by convolutions");
  reduce->add_option("--rep", rep_file, "Representation JSON")->required();
  reduce->add_option("--q", q_file, "q vector JSON");
  reduce->add_option("--theta", theta_file, "theta JSON");
  reduce->add_option("--max-steps", max_steps, "Step limit");
  reduce->callback([&] {
    if (mode == "float") throw ModeError("reduce is exact-only");
    Json doc = read_json(rep_file);
    Representation x = rep_from_json(doc);
    QVector q = qvector_from_json(x.quiver(), param_doc(q_file, doc, "q"));
    ThetaVector theta = theta_from_json(x.quiver(), param_doc(theta_file, doc, "theta"));
    out.write(trace_to_json(reduce_dimension_vector(x, q, theta, max_steps)));
  });

  auto* star = app.add_subcommand("star", "Star-shaped quivers and monodromy tuples");
  star->require_subcommand(1);
  auto* to_rep = star->add_subcommand("to-rep", "Tuple with flags to a star representation");
  to_rep->add_option("--tuple", tuple_file, "Tuple JSON")->required();
  to_rep->callback([&] {
    LocalSystemData d = tuple_from_json(read_json(tuple_file));
    auto [sq, x] = tuple_to_rep(d);
    Json j;
    j["rep"] = rep_to_json(x);
    j["q"] = qvector_to_json(sq.dq, star_q(sq, d.ladders));
    if (!d.beta.empty()) j["theta"] = theta_to_json(sq.dq, params_from_weights(sq, d.ladders, d.beta, x.dims()).second);
    out.write(j);
  });
  auto* to_tuple = star->add_subcommand("to-tuple", "Star representation to its tuple and flags");
  to_tuple->add_option("--rep", rep_file, "Representation JSON on build_star(arms)")->required();
  to_tuple->add_option("--ladders", ladders_file, "Ladders JSON (array of arrays, or a tuple document)")->required();
  to_tuple->add_flag("--assume-stable", assume_stable, "Fail when some a_{i,j} is not injective");
  to_tuple->callback([&] {
    auto ladders = ladders_from_json(read_json(ladders_file));
    StarQuiver sq = build_star(arms_of(ladders));
    Representation x = on_star(sq, rep_from_json(read_json(rep_file)));
    RepToTupleResult r = rep_to_tuple(sq, x, ladders, assume_stable);
    Json j = tuple_to_json(r.data);
    j["containments"] = r.containments;
    j["flag_dims"] = r.flag_dims;
    j["a_injective"] = r.a_injective;
    j["detail"] = r.detail;
    out.write(j);
    rc = r.containments && r.flag_dims ? kPass : kPropertyFailure;
  });
  auto* star_stab = star->add_subcommand("stability", "Weighted-flag (semi)stability probe");
  star_stab->add_option("--tuple", tuple_file, "Tuple JSON with beta")->required();
  star_stab->add_option("--seeds", seeds_file, "JSON array of seed matrices (columns)");
  star_stab->callback([&] {
    LocalSystemData d = tuple_from_json(read_json(tuple_file));
    std::vector<QMatrix> seeds;
    if (!seeds_file.empty()) {
      for (const auto& m : read_json(seeds_file)) seeds.push_back(matrix_from_json(m));
    }
    BetaStabilityReport r = beta_stability_report(d, seeds);
    Json cands = Json::array();
    for (const auto& c : r.candidates) {
      cands.push_back({{"basis", matrix_to_json(c.basis)},
                       {"lhs", rational_to_string(c.lhs)},
                       {"rhs", rational_to_string(c.rhs)},
                       {"violates_semistability", c.violates_semistability},
                       {"violates_stability", c.violates_stability}});
    }
    out.write({{"semistability_disproved", r.semistability_disproved},
               {"stability_disproved", r.stability_disproved},
               {"candidates", cands}});
  });

  auto* roots = app.add_subcommand("roots", "Positive roots a <= v with (a, a) <= 2");
  roots->add_option("--quiver", quiver_file, "Quiver or representation JSON");
  roots->add_option("--named", named, "Named quiver, e.g. D4 or affine-D4");
  roots->add_option("--dim", dim_file, "Dimension vector JSON")->required();
  roots->callback([&] {
    DoubledQuiver dq = quiver_arg(quiver_file, named);
    DimVector v = dims_from_json(dq, read_json(dim_file));
    Json list = Json::array();
    for (const auto& a : enumerate_Rplus_bounded(dq, v)) {
      list.push_back({{"root", dims_to_json(dq, a)}, {"norm", bilinear_form(dq, a, a)}});
    }
    Json j;
    j["dims"] = dims_to_json(dq, v);
    j["roots"] = std::move(list);
    if (!dq.has_loops()) j["cartan"] = root_datum_from_graph(dq).cartan;
    out.write(j);
  });

  auto* generic = app.add_subcommand("generic", "Genericity of (q, theta) at v");
  generic->add_option("--quiver", quiver_file, "Quiver or representation JSON");
  generic->add_option("--named", named, "Named quiver");
  generic->add_option("--q", q_file, "q vector JSON")->required();
  generic->add_option("--theta", theta_file, "theta JSON")->required();
  generic->add_option("--dim", dim_file, "Dimension vector JSON")->required();
  generic->callback([&] {
    DoubledQuiver dq = quiver_arg(quiver_file, named);
    GenericityReport g = is_generic(dq, dims_from_json(dq, read_json(dim_file)), qvector_from_json(dq, read_json(q_file)),
                                    theta_from_json(dq, read_json(theta_file)));
    out.write(genericity_to_json(dq, g));
    rc = g.generic ? kPass : kPropertyFailure;
  });

  auto* jacobian = app.add_subcommand("jacobian", "Dimension at x from the numeric Jacobian of Phi");
  jacobian->add_option("--rep", rep_file, "Representation JSON (exact input is converted)")->required();
  jacobian->add_option("--tol", tol, "Relative singular-value threshold");
  jacobian->callback([&] {
    DimensionCheck d = jacobian_dimension_check(float_rep_from_json(read_json(rep_file)), tol);
    out.write(dimension_check_to_json(d));
    rc = d.match ? kPass : kPropertyFailure;
  });

  std::string suite_name;
  std::size_t count = 0;
  bool count_set = false, list = false;
  unsigned threads = 0;
  auto* suite = app.add_subcommand("suite", "Run a named property suite");
  suite->add_option("--name", suite_name, "Suite name");
  auto* count_opt = suite->add_option("--count", count, "Instances (default: the suite's acceptance count)");
  suite->add_option("--seed", seed, "Seed");
  suite->add_option("--threads", threads, "Worker threads, 0 = hardware concurrency");
  suite->add_flag("--list", list, "List suites");
  suite->callback([&] {
    if (list) {
      Json j = Json::array();
      for (const auto& s : suite_catalog()) j.push_back({{"name", s.name}, {"count", s.default_count}, {"description", s.description}});
      out.write(j);
      return;
    }
    if (suite_name.empty()) throw UsageError("--name is required");
    count_set = count_opt->count() > 0;
    if (!count_set) {
      for (const auto& s : suite_catalog()) {
        if (s.name == suite_name) count = s.default_count;
      }
    }
    SuiteReport r = run_suite(suite_name, seed, count, threads);
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
    out.write(suite_report_to_json(r));
    rc = r.passed() ? kPass : kPropertyFailure;
  });

  std::string dims_text, strategy = "generic";
  auto* generate = app.add_subcommand("generate", "Generate a solution of Phi = q");
  generate->add_option("--named", named, "Named quiver")->required();
  generate->add_option("--dims", dims_text, "Comma-separated dimension vector")->required();
  generate->add_option("--seed", seed, "Seed");
  generate->add_option("--strategy", strategy, "generic or target")->check(CLI::IsMember({"generic", "target"}));
  generate->add_option("--target-q", q_file, "Target q JSON for --strategy target");
  generate->callback([&] {
    InstanceRecipe recipe;
    recipe.quiver = named;
    std::stringstream ss(dims_text);
    std::string item;
    while (std::getline(ss, item, ',')) recipe.dims.push_back(std::stol(item));
    recipe.seed = seed;
    recipe.mode = mode;
    recipe.strategy = strategy == "target" ? ParameterStrategy::SolveAtVertexwiseTarget : ParameterStrategy::GenericRandom;
    DoubledQuiver dq(named_quiver(named));
    if (recipe.strategy == ParameterStrategy::SolveAtVertexwiseTarget) {
      if (q_file.empty()) throw UsageError("--target-q is required with --strategy target");
      recipe.target_q = qvector_from_json(dq, read_json(q_file));
    }
    GeneratedSolution s = generate_solution(recipe);
    Json j;
    j["rep"] = mode == "float" ? rep_to_json(to_float(s.x)) : rep_to_json(s.x);
    j["q"] = qvector_to_json(dq, s.q);
    j["theta"] = theta_to_json(dq, s.theta);
    j["method"] = s.method;
    out.write(j);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsageError;
  } catch (const UsageError& e) {
    return error_exit("usage", e.what());
  } catch (const UnknownSuite& e) {
    return error_exit("usage", e.what());
  } catch (const ContractViolation& e) {
    return error_exit("contract", e.what());
  } catch (const Error& e) {
    return error_exit("precondition", e.what());
  } catch (const Json::exception& e) {
    return error_exit("json", e.what());
  } catch (const std::exception& e) {
    return error_exit("error", e.what());
  }
  return rc;
}
