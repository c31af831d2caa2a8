#include "mqv/quiver.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "mqv/errors.hpp"

namespace mqv {

Quiver::Quiver(std::vector<std::string> vertices, std::vector<Arrow> arrows)
    : vertices_(std::move(vertices)), arrows_(std::move(arrows)) {
  for (std::size_t k = 0; k < vertices_.size(); ++k) {
    if (!index_.emplace(vertices_[k], k).second) throw ContractViolation("duplicate vertex '" + vertices_[k] + "'");
  }
  std::set<std::string> ids;
  for (const auto& a : arrows_) {
    if (a.id.empty() || a.id.front() == '~') throw ContractViolation("arrow id '" + a.id + "' is empty or starts with '~'");
    if (!ids.insert(a.id).second) throw ContractViolation("duplicate arrow id '" + a.id + "'");
    if (!has_vertex(a.out) || !has_vertex(a.in)) {
      throw ContractViolation("arrow '" + a.id + "' has an endpoint outside the vertex set");
    }
  }
}

std::size_t Quiver::vertex_index(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw ContractViolation("unknown vertex '" + name + "'");
  return it->second;
}

DoubledQuiver::DoubledQuiver(Quiver base, const std::optional<std::vector<std::string>>& order)
    : base_(std::move(base)) {
  const std::size_t m = base_.arrows().size();
  arrows_.resize(2 * m);
  for (std::size_t k = 0; k < m; ++k) {
    const Arrow& a = base_.arrows()[k];
    std::size_t o = base_.vertex_index(a.out), i = base_.vertex_index(a.in);
    arrows_[k] = {a.id, o, i, +1, k + m};
    arrows_[k + m] = {reversed_id(a.id), i, o, -1, k};
  }
  order_.resize(2 * m);
  if (order) {
    if (order->size() != 2 * m) throw ContractViolation("explicit order must list every arrow of the doubled quiver once");
    std::vector<bool> seen(2 * m, false);
    for (std::size_t p = 0; p < order->size(); ++p) {
      std::size_t h = find((*order)[p]);
      if (seen[h]) throw ContractViolation("explicit order repeats arrow '" + (*order)[p] + "'");
      seen[h] = true;
      order_[p] = h;
    }
  } else {
    std::iota(order_.begin(), order_.end(), 0);
  }
  rebuild_indices();
}

void DoubledQuiver::rebuild_indices() {
  position_.assign(arrows_.size(), 0);
  for (std::size_t p = 0; p < order_.size(); ++p) position_[order_[p]] = p;
  incoming_.assign(num_vertices(), {});
  outgoing_.assign(num_vertices(), {});
  for (std::size_t h : order_) {
    incoming_[arrows_[h].in].push_back(h);
    outgoing_[arrows_[h].out].push_back(h);
  }
}

std::size_t DoubledQuiver::find(const std::string& id) const {
  for (std::size_t h = 0; h < arrows_.size(); ++h) {
    if (arrows_[h].id == id) return h;
  }
  throw ContractViolation("unknown arrow '" + id + "'");
}

std::vector<std::string> DoubledQuiver::order_ids() const {
  std::vector<std::string> ids;
  ids.reserve(order_.size());
  for (std::size_t h : order_) ids.push_back(arrows_[h].id);
  return ids;
}

bool DoubledQuiver::has_loop_at(std::size_t i) const {
  return std::any_of(arrows_.begin(), arrows_.end(), [i](const DoubledArrow& a) { return a.out == i && a.in == i; });
}

bool DoubledQuiver::has_loops() const {
  return std::any_of(arrows_.begin(), arrows_.end(), [](const DoubledArrow& a) { return a.out == a.in; });
}

bool DoubledQuiver::omega_first_at(std::size_t i) const {
  bool seen_negative = false;
  for (std::size_t h : incoming(i)) {
    if (arrows_[h].eps < 0) {
      seen_negative = true;
    } else if (seen_negative) {
      return false;
    }
  }
  return true;
}

bool DoubledQuiver::canonical_order() const {
  bool seen_negative = false;
  for (std::size_t h : order_) {
    if (arrows_[h].eps < 0) {
      seen_negative = true;
    } else if (seen_negative) {
      return false;
    }
  }
  return true;
}

DoubledQuiver DoubledQuiver::reoriented(std::size_t h) const {
  DoubledQuiver copy = *this;
  copy.arrows_.at(h).eps = -copy.arrows_[h].eps;
  copy.arrows_[copy.arrows_[h].partner].eps = -copy.arrows_[copy.arrows_[h].partner].eps;
  return copy;
}

DoubledQuiver DoubledQuiver::opposite() const {
  std::vector<Arrow> arrows;
  for (const auto& a : base_.arrows()) arrows.push_back({a.id, a.in, a.out});
  return DoubledQuiver(Quiver(base_.vertices(), std::move(arrows)));
}

std::vector<std::vector<long>> DoubledQuiver::adjacency() const {
  std::vector<std::vector<long>> a(num_vertices(), std::vector<long>(num_vertices(), 0));
  for (const auto& h : arrows_) a[h.in][h.out] += 1;
  return a;
}

DoubledQuiver double_quiver(const Quiver& q, const std::optional<std::vector<std::string>>& order) {
  return DoubledQuiver(q, order);
}

std::string star_vertex_name(int arm, int j) {
  if (j == 0) return "0";
  return std::to_string(arm) + "." + std::to_string(j);
}

std::string star_arrow_name(int arm, int j) { return "a_" + std::to_string(arm) + "." + std::to_string(j); }

std::size_t StarQuiver::vertex(int arm, int j) const { return dq.vertex_index(star_vertex_name(arm, j)); }

std::size_t StarQuiver::a(int arm, int j) const { return dq.find(star_arrow_name(arm, j)); }

std::size_t StarQuiver::b(int arm, int j) const { return dq.arrow(a(arm, j)).partner; }

StarQuiver build_star(const std::vector<int>& arm_lengths) {
  if (arm_lengths.empty()) throw ContractViolation("star quiver needs at least one arm");
  std::vector<std::string> vertices{"0"};
  std::vector<Arrow> arrows;
  for (std::size_t i = 0; i < arm_lengths.size(); ++i) {
    const int arm = static_cast<int>(i) + 1;
    if (arm_lengths[i] < 0) throw ContractViolation("negative arm length");
    for (int j = 1; j <= arm_lengths[i]; ++j) vertices.push_back(star_vertex_name(arm, j));
    for (int j = 0; j < arm_lengths[i]; ++j) {
      arrows.push_back({star_arrow_name(arm, j), star_vertex_name(arm, j + 1), star_vertex_name(arm, j)});
    }
  }
  return StarQuiver{DoubledQuiver(Quiver(std::move(vertices), std::move(arrows))), arm_lengths};
}

}  // namespace mqv
