#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mqv {

struct Arrow {
  std::string id;
  std::string out;
  std::string in;
};

/// Finite quiver (I, Omega). Parallel arrows and loops are allowed.
class Quiver {
 public:
  Quiver() = default;
  Quiver(std::vector<std::string> vertices, std::vector<Arrow> arrows);

  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<Arrow>& arrows() const { return arrows_; }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t vertex_index(const std::string& name) const;
  bool has_vertex(const std::string& name) const { return index_.count(name) != 0; }

 private:
  std::vector<std::string> vertices_;
  std::vector<Arrow> arrows_;
  std::map<std::string, std::size_t> index_;
};

struct DoubledArrow {
  std::string id;
  std::size_t out = 0;
  std::size_t in = 0;
  int eps = 1;
  std::size_t partner = 0;  // index of h-bar
};

/// Doubled quiver H = Omega ⊔ Omega-bar with sign and total order.
/// Arrow indices: base arrow k is h = k, its reverse ("~id") is h = k + |Omega|.
/// Signs normally equal +1 on the first half; reoriented() flips a pair while
/// keeping the order positions.
class DoubledQuiver {
 public:
  DoubledQuiver() = default;
  /// `order` lists every arrow id of H (reversed ids prefixed by '~') from smallest to largest.
  explicit DoubledQuiver(Quiver base, const std::optional<std::vector<std::string>>& order = std::nullopt);

  static std::string reversed_id(const std::string& id) { return "~" + id; }

  const Quiver& base() const { return base_; }
  std::size_t num_vertices() const { return base_.num_vertices(); }
  std::size_t num_arrows() const { return arrows_.size(); }
  const DoubledArrow& arrow(std::size_t h) const { return arrows_.at(h); }
  const std::vector<DoubledArrow>& arrows() const { return arrows_; }
  std::size_t find(const std::string& id) const;
  std::size_t vertex_index(const std::string& name) const { return base_.vertex_index(name); }
  const std::string& vertex_name(std::size_t i) const { return base_.vertices().at(i); }

  /// Arrow indices sorted by the total order.
  const std::vector<std::size_t>& order() const { return order_; }
  std::size_t position(std::size_t h) const { return position_.at(h); }
  bool less(std::size_t h1, std::size_t h2) const { return position_.at(h1) < position_.at(h2); }
  std::vector<std::string> order_ids() const;

  /// H_i = {h : in(h) = i}, sorted by the total order.
  const std::vector<std::size_t>& incoming(std::size_t i) const { return incoming_.at(i); }
  const std::vector<std::size_t>& outgoing(std::size_t i) const { return outgoing_.at(i); }

  bool has_loop_at(std::size_t i) const;
  bool has_loops() const;
  /// Within H_i every eps = +1 arrow precedes every eps = -1 arrow.
  bool omega_first_at(std::size_t i) const;
  /// Every eps = +1 arrow precedes every eps = -1 arrow globally.
  bool canonical_order() const;

  /// Copy with the orientation of the pair {h, h-bar} flipped; order positions kept.
  DoubledQuiver reoriented(std::size_t h) const;
  /// Double of the opposite quiver (every base arrow reversed), canonical order.
  DoubledQuiver opposite() const;

  /// Adjacency counts A_ij = #{h in H : in(h) = i, out(h) = j}.
  std::vector<std::vector<long>> adjacency() const;

 private:
  void rebuild_indices();

  Quiver base_;
  std::vector<DoubledArrow> arrows_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> position_;
  std::vector<std::vector<std::size_t>> incoming_;
  std::vector<std::vector<std::size_t>> outgoing_;
};

DoubledQuiver double_quiver(const Quiver& q, const std::optional<std::vector<std::string>>& order = std::nullopt);

/// Star-shaped quiver: center "0", arm vertices "i.j" (1-based), arrows
/// "a_i.j": [i,j+1] -> [i,j] with [i,0] = "0".
struct StarQuiver {
  DoubledQuiver dq;
  std::vector<int> arm_lengths;

  std::size_t center() const { return dq.vertex_index("0"); }
  /// Vertex [i,j]; j = 0 is the center. Arms are 1-based.
  std::size_t vertex(int arm, int j) const;
  /// Index in H of a_{i,j}: [i,j+1] -> [i,j].
  std::size_t a(int arm, int j) const;
  /// Index in H of b_{i,j}: [i,j] -> [i,j+1].
  std::size_t b(int arm, int j) const;
  int arms() const { return static_cast<int>(arm_lengths.size()); }
};

std::string star_vertex_name(int arm, int j);
std::string star_arrow_name(int arm, int j);

/// Zero-length arms are allowed; an empty arm list is a contract violation.
StarQuiver build_star(const std::vector<int>& arm_lengths);

}  // namespace mqv
