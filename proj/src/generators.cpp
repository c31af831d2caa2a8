#include "mqv/generators.hpp"

#include <algorithm>
#include <sstream>

#include "mqv/convolution.hpp"
#include "mqv/linalg.hpp"

namespace mqv {

namespace {

std::vector<std::string> numbered(long n) {
  std::vector<std::string> v;
  for (long k = 1; k <= n; ++k) v.push_back(std::to_string(k));
  return v;
}

long parse_count(const std::string& s, const std::string& name) {
  try {
    std::size_t used = 0;
    long n = std::stol(s, &used);
    if (used == s.size()) return n;
  } catch (const std::exception&) {
  }
  throw ContractViolation("unknown quiver name '" + name + "'");
}

Arrow arrow(long k, long from, long to) { return {"a" + std::to_string(k), std::to_string(from), std::to_string(to)}; }

GaussRational random_q_entry(std::mt19937_64& rng) {
  GaussRational z = random_small_rational(rng, false);
  if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
    std::uniform_int_distribution<long> im(-2, 2);
    z = z + GaussRational::imag_unit() * GaussRational(im(rng));
    if (z.is_zero() || z.is_one()) z = GaussRational(2L);
  }
  return z;
}

/// q^a != 1 for every positive root a strictly below v.
bool q_generic_below(const DoubledQuiver& dq, const DimVector& v, const QVector& q) {
  for (const auto& a : enumerate_Rplus_bounded(dq, v)) {
    if (a != v && q_power(q, a).is_one()) return false;
  }
  return true;
}

/// Reflections taking target down to a simple root; returns the growth word (reverse order).
std::vector<std::size_t> growth_word(const DoubledQuiver& dq, const DimVector& target, std::size_t& start) {
  const std::size_t n = dq.num_vertices();
  DimVector cur = target;
  std::vector<std::size_t> down;
  for (long d : cur) {
    if (d < 0) throw GenerationFailure("dimension vector has a negative entry");
  }
  while (total(cur) > 1) {
    bool moved = false;
    for (std::size_t i = 0; i < n && !moved; ++i) {
      if (bilinear_form(dq, cur, unit_vector(n, i)) > 0) {
        cur = reflect_dim(dq, i, cur);
        down.push_back(i);
        moved = true;
      }
    }
    if (!moved) throw GenerationFailure("dimension vector is not a real root reachable by reflections");
    for (long d : cur) {
      if (d < 0) throw GenerationFailure("reflection left the positive cone");
    }
  }
  if (total(cur) != 1) throw GenerationFailure("dimension vector is zero");
  start = static_cast<std::size_t>(std::find(cur.begin(), cur.end(), 1L) - cur.begin());
  std::reverse(down.begin(), down.end());
  return down;
}

GeneratedSolution grow(const DoubledQuiver& dq, std::size_t start, const std::vector<std::size_t>& word,
                       QVector q, ThetaVector theta) {
  const std::size_t n = dq.num_vertices();
  GeneratedSolution s;
  s.x = Representation(dq, unit_vector(n, start));
  for (std::size_t i : word) {
    if (q[i].is_one()) throw PreconditionFailure("q_i = 1 on the growth path");
    ConvolutionResult c = middle_convolve(s.x, i, q, theta);
    if (!c.identities.all()) throw GenerationFailure("convolution identities failed during growth");
    s.x = c.x_prime;
    q = c.q_prime;
    theta = c.theta_prime;
  }
  s.q = q;
  s.theta = theta;
  return s;
}

}  // namespace

Quiver named_quiver(const std::string& name) {
  std::vector<Arrow> arrows;
  if (name == "jordan") return Quiver({"1"}, {{"l", "1", "1"}});
  if (name == "E6") {
    for (long k = 1; k <= 4; ++k) arrows.push_back(arrow(k, k, k + 1));
    arrows.push_back(arrow(5, 3, 6));
    return Quiver(numbered(6), arrows);
  }
  if (name == "affine-D4") return build_star({1, 1, 1, 1}).dq.base();
  if (name.rfind("star:", 0) == 0) {
    std::vector<int> arms;
    std::stringstream ss(name.substr(5));
    std::string item;
    while (std::getline(ss, item, ',')) arms.push_back(static_cast<int>(parse_count(item, name)));
    return build_star(arms).dq.base();
  }
  if (name.rfind("affine-A", 0) == 0) {
    const long n = parse_count(name.substr(8), name);
    if (n < 1) throw ContractViolation("affine-A needs at least one vertex");
    if (n == 1) return named_quiver("jordan");
    for (long k = 1; k <= n; ++k) arrows.push_back(arrow(k, k, k % n + 1));
    return Quiver(numbered(n), arrows);
  }
  if (name.size() > 1 && name[0] == 'A') {
    const long n = parse_count(name.substr(1), name);
    if (n < 1) throw ContractViolation("A_n needs n >= 1");
    for (long k = 1; k < n; ++k) arrows.push_back(arrow(k, k, k + 1));
    return Quiver(numbered(n), arrows);
  }
  if (name.size() > 1 && name[0] == 'D') {
    const long n = parse_count(name.substr(1), name);
    if (n < 4) throw ContractViolation("D_n needs n >= 4");
    for (long k = 1; k < n - 1; ++k) arrows.push_back(arrow(k, k, k + 1));
    arrows.push_back(arrow(n - 1, n - 2, n));
    return Quiver(numbered(n), arrows);
  }
  throw ContractViolation("unknown quiver name '" + name + "'");
}

GaussRational random_small_rational(std::mt19937_64& rng, bool allow_one) {
  std::uniform_int_distribution<long> num(-5, 5), den(1, 4);
  while (true) {
    const long p = num(rng);
    if (p == 0) continue;
    GaussRational z = GaussRational::fraction(p, den(rng));
    if (!allow_one && z.is_one()) continue;
    return z;
  }
}

QMatrix random_small_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, long bound) {
  std::uniform_int_distribution<long> e(-bound, bound);
  QMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = GaussRational(e(rng));
  return m;
}

QMatrix random_invertible(std::mt19937_64& rng, std::size_t n) {
  while (true) {
    QMatrix m = random_small_matrix(rng, n, n, 2);
    if (!det(m).is_zero()) return m;
  }
}

std::vector<QMatrix> random_group_element(std::mt19937_64& rng, const DimVector& dims) {
  std::vector<QMatrix> g;
  for (long d : dims) g.push_back(random_invertible(rng, static_cast<std::size_t>(d)));
  return g;
}

Representation random_representation(const DoubledQuiver& dq, const DimVector& dims, std::mt19937_64& rng,
                                     long bound, double density) {
  Representation x(dq, dims);
  std::bernoulli_distribution keep(density);
  for (std::size_t h = 0; h < dq.num_arrows(); ++h) {
    const auto& a = dq.arrow(h);
    const auto r = static_cast<std::size_t>(dims[a.in]), c = static_cast<std::size_t>(dims[a.out]);
    if (keep(rng)) x.set_map(h, random_small_matrix(rng, r, c, bound));
  }
  return x;
}

Representation random_in_domain(const DoubledQuiver& dq, const DimVector& dims, std::mt19937_64& rng, int attempts) {
  for (int k = 0; k < attempts; ++k) {
    Representation x(dq, dims);
    for (std::size_t h = 0; h < dq.num_arrows(); ++h) {
      const auto& a = dq.arrow(h);
      QMatrix m(static_cast<std::size_t>(dims[a.in]), static_cast<std::size_t>(dims[a.out]));
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = random_small_rational(rng);
      x.set_map(h, m);
    }
    if (in_invertibility_domain(x)) return x;
  }
  throw GenerationFailure("no in-domain representation found within the budget");
}

FloatRepresentation random_float_representation(const DoubledQuiver& dq, const DimVector& dims,
                                                std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  FloatRepresentation x(dq, dims);
  for (std::size_t h = 0; h < dq.num_arrows(); ++h) {
    const auto& a = dq.arrow(h);
    CMatrix m(static_cast<std::size_t>(dims[a.in]), static_cast<std::size_t>(dims[a.out]));
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = Complex(g(rng), g(rng));
    x.set_map(h, m);
  }
  return x;
}

FramedRepresentation random_framed(const DoubledQuiver& dq, const DimVector& v, const DimVector& w,
                                   std::mt19937_64& rng, double density) {
  std::bernoulli_distribution keep(density);
  FramedRepresentation fr(random_representation(dq, v, rng, 1, density), w);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto vi = static_cast<std::size_t>(v[i]), wi = static_cast<std::size_t>(w[i]);
    if (keep(rng)) fr.a[i] = random_small_matrix(rng, vi, wi, 1);
    if (keep(rng)) fr.b[i] = random_small_matrix(rng, wi, vi, 1);
  }
  return fr;
}

GeneratedSolution generate_by_reflection(const DoubledQuiver& dq, const DimVector& target, std::mt19937_64& rng,
                                         int attempts) {
  if (dq.has_loops()) throw GenerationFailure("reflection growth needs a loop-free quiver");
  const std::size_t n = dq.num_vertices();
  if (target.size() != n) throw ContractViolation("dimension vector has wrong length");
  std::size_t start = 0;
  const std::vector<std::size_t> word = growth_word(dq, target, start);
  std::uniform_int_distribution<long> th(-3, 3);
  for (int k = 0; k < attempts; ++k) {
    QVector q(n);
    ThetaVector theta(n);
    for (std::size_t i = 0; i < n; ++i) {
      q[i] = random_q_entry(rng);
      theta[i] = Rational(th(rng));
    }
    q[start] = GaussRational(1L);
    theta[start] = 0;
    GeneratedSolution s;
    try {
      s = grow(dq, start, word, q, theta);
    } catch (const PreconditionFailure&) {
      continue;
    }
    if (!q_generic_below(dq, target, s.q)) continue;
    s.x = act(random_group_element(rng, s.x.dims()), s.x);
    s.method = "reflection";
    return s;
  }
  throw GenerationFailure("no generic parameters found within the budget");
}

LocalSystemData generate_star_tuple(int n, std::mt19937_64& rng, int attempts) {
  if (n < 3) throw ContractViolation("generate_star_tuple needs at least three matrices");
  auto eigenpair = [&]() {
    GaussRational a = random_small_rational(rng), b = random_small_rational(rng);
    while (b == a) b = random_small_rational(rng);
    return std::vector<GaussRational>{a, b};
  };
  auto diag = [](const std::vector<GaussRational>& e) {
    QMatrix d(2, 2);
    d(0, 0) = e[0];
    d(1, 1) = e[1];
    return d;
  };
  for (int k = 0; k < attempts; ++k) {
    LocalSystemData d;
    d.r = 2;
    QMatrix m = QMatrix::identity(2);
    for (int i = 0; i < n - 2; ++i) {
      d.ladders.push_back(eigenpair());
      QMatrix p = random_invertible(rng, 2);
      d.matrices.push_back(p * diag(d.ladders.back()) * inverse(p));
      m = m * d.matrices.back();
    }
    // A_{n-1} sends v to w = lambda^{-1} M^{-1} v, so (M A_{n-1})^{-1} has eigenvector v.
    const GaussRational lambda = random_small_rational(rng);
    QMatrix v = random_small_matrix(rng, 2, 1, 2);
    QMatrix w = inverse(m) * v * lambda.inverse();
    if (rank(hstack(v, w)) < 2) continue;
    d.ladders.push_back(eigenpair());
    const auto& e = d.ladders.back();
    const GaussRational gap = (e[0] - e[1]).inverse();
    QMatrix p = hstack((w - v * e[1]) * gap, (v * e[0] - w) * gap);
    d.matrices.push_back(p * diag(e) * inverse(p));
    m = m * d.matrices.back();
    QMatrix last = inverse(m);
    const GaussRational mu = det(last) / lambda;
    if (mu == lambda) continue;
    if (std::bernoulli_distribution(0.5)(rng)) {
      d.ladders.push_back({lambda, mu});
    } else {
      d.ladders.push_back({mu, lambda});
    }
    d.matrices.push_back(last);

    // Irreducible iff no eigenline of A_1 is invariant under all the others.
    bool reducible = false;
    for (const auto& xi : d.ladders[0]) {
      QMatrix line = kernel_basis(d.matrices[0] - QMatrix::scalar(2, xi));
      bool common = true;
      for (const auto& a : d.matrices) common = common && rank(hstack(line, a * line)) == 1;
      reducible = reducible || common;
    }
    if (reducible) continue;

    std::vector<std::vector<QMatrix>> flags;
    std::uniform_int_distribution<long> step(1, 3);
    for (int i = 0; i < n; ++i) {
      flags.push_back(image_ladder_flags(d.matrices[i], d.ladders[i]));
      d.beta.push_back({Rational(0), ratio(step(rng), 2)});
    }
    d.flags = std::move(flags);
    return d;
  }
  throw GenerationFailure("no irreducible tuple found within the budget");
}

GeneratedSolution generate_star_solution(int n, std::mt19937_64& rng) {
  for (int k = 0; k < 32; ++k) {
    LocalSystemData d = generate_star_tuple(n, rng);
    auto [sq, x] = tuple_to_rep(d);
    auto [q, theta] = params_from_weights(sq, d.ladders, d.beta, x.dims());
    if (!q_generic_below(sq.dq, x.dims(), q)) continue;
    GeneratedSolution s;
    s.x = act(random_group_element(rng, x.dims()), x);
    s.q = q;
    s.theta = theta;
    s.method = "star-tuple";
    return s;
  }
  throw GenerationFailure("no generic star tuple found within the budget");
}

GeneratedSolution generate_solution(const InstanceRecipe& recipe) {
  std::mt19937_64 rng(recipe.seed);
  DoubledQuiver dq(named_quiver(recipe.quiver));
  const std::size_t n = dq.num_vertices();
  if (recipe.dims.size() != n) throw ContractViolation("dimension vector has wrong length for " + recipe.quiver);

  if (recipe.strategy == ParameterStrategy::SolveAtVertexwiseTarget) {
    if (!recipe.target_q || recipe.target_q->size() != n) throw ContractViolation("target q is required");
    if (!q_power(*recipe.target_q, recipe.dims).is_one()) {
      throw GenerationFailure("target q has q^dims != 1; no solution exists");
    }
    std::size_t start = 0;
    const auto word = growth_word(dq, recipe.dims, start);
    // Pull the target back along the word; the start vertex is then forced to 1.
    QVector q0 = *recipe.target_q;
    for (auto it = word.rbegin(); it != word.rend(); ++it) q0 = reflect_q(dq, *it, q0);
    ThetaVector theta(n, Rational(0));
    GeneratedSolution s;
    try {
      s = grow(dq, start, word, q0, theta);
    } catch (const PreconditionFailure&) {
      throw GenerationFailure("target q meets q_i = 1 on the growth path");
    }
    s.x = act(random_group_element(rng, s.x.dims()), s.x);
    s.method = "reflection-target";
    return s;
  }

  bool star_shape = recipe.quiver.rfind("star:", 0) == 0 || recipe.quiver == "affine-D4";
  if (star_shape && n >= 4 && recipe.dims[0] == 2) {
    bool ones = true;
    for (std::size_t k = 1; k < n; ++k) ones = ones && recipe.dims[k] == 1;
    bool unit_arms = true;
    for (std::size_t h = 0; h < dq.base().arrows().size(); ++h) unit_arms = unit_arms && dq.arrow(h).in == 0;
    if (ones && unit_arms) {
      GeneratedSolution s = generate_star_solution(static_cast<int>(n) - 1, rng);
      return s;
    }
  }
  return generate_by_reflection(dq, recipe.dims, rng);
}

FramedSolution generate_framed_q1(const DoubledQuiver& dq, const DimVector& w, std::mt19937_64& rng,
                                  int max_steps) {
  if (dq.has_loops()) throw GenerationFailure("framed growth needs a loop-free quiver");
  const std::size_t n = dq.num_vertices();
  if (w.size() != n) throw ContractViolation("framing vector has wrong length");
  std::uniform_int_distribution<long> th(1, 3);
  ThetaVector theta(n);
  for (auto& t : theta) t = Rational(-th(rng));
  FramedRepresentation zero(Representation(dq, DimVector(n, 0)), w);
  FramedExtension ext = frame(zero, QVector(n, GaussRational(1L)), theta);
  Representation x = ext.x;
  ThetaVector t = ext.theta;
  FramedSolution out;
  for (int step = 0; step <= max_steps; ++step) {
    std::vector<std::size_t> negative;
    for (std::size_t i = 0; i < n; ++i) {
      if (sgn(t[i]) < 0) negative.push_back(i);
    }
    if (negative.empty()) {
      std::vector<QMatrix> g = random_group_element(rng, x.dims());
      g[ext.infinity] = QMatrix::identity(1);
      x = act(g, x);
      out.x = unframe(x, dq, w);
      out.theta.assign(t.begin(), t.begin() + static_cast<long>(n));
      return out;
    }
    const std::size_t i = negative[std::uniform_int_distribution<std::size_t>(0, negative.size() - 1)(rng)];
    try {
      ConvolutionResult c = middle_convolve(x, i, ext.q, t);
      if (!c.identities.all()) throw GenerationFailure("convolution identities failed during framed growth");
      x = c.x_prime;
      t = c.theta_prime;
      out.word.push_back(i);
    } catch (const PreconditionFailure& e) {
      throw GenerationFailure(std::string("framed growth stalled: ") + e.what());
    }
  }
  throw GenerationFailure("framed growth did not reach theta > 0 (base quiver not of finite type?)");
}

}  // namespace mqv
