#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "percolab/config.hpp"
#include "percolab/lattice.hpp"

namespace percolab {

/// Union by size with path halving.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n = 0) { reset(n); }

  void reset(std::size_t n);

  std::size_t find(std::size_t a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }

  /// Returns true when two distinct components were merged.
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  bool same(std::size_t a, std::size_t b) { return find(a) == find(b); }
  std::size_t component_size(std::size_t a) { return size_[find(a)]; }
  std::size_t universe() const { return parent_.size(); }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

struct HorizontalCrossing {
  Rect rect;
};

/// Top-to-bottom crossing of the dual of `rect` through dual edges whose
/// primal partners are closed. Decreasing in the open set.
struct VerticalDualCrossing {
  Rect rect;
};

/// `center` joined by open edges inside box(center, radius) to a vertex at
/// L-infinity distance exactly `radius`. Radius 0 always holds.
struct Arm {
  Vertex center;
  int radius = 0;
};

using EventId = std::variant<HorizontalCrossing, VerticalDualCrossing, Arm>;

enum class Monotonicity : std::uint8_t { increasing, decreasing };

Monotonicity monotonicity(const EventId& event);
std::string event_name(const EventId& event);

/// Smallest rectangle holding every edge the event reads.
Rect support(const EventId& event);

/// Requires omega.rect() to contain support(event).
bool evaluate(const EventId& event, const Configuration& omega);
bool evaluate(const EventId& event, const Configuration& omega, DisjointSets& scratch);

// The crossing queries accept any configuration whose rectangle contains `rect`;
// only edges of `rect` are read. Scratch overloads reuse the union-find storage.
bool has_horizontal_crossing(const Rect& rect, const Configuration& omega);
bool has_horizontal_crossing(const Rect& rect, const Configuration& omega, DisjointSets& scratch);
bool has_vertical_dual_crossing(const Rect& rect, const Configuration& omega);
bool has_vertical_dual_crossing(const Rect& rect, const Configuration& omega,
                                DisjointSets& scratch);

bool arm_event(Vertex center, int radius, const Configuration& omega);

/// Largest L-infinity distance from `center` reached by its open cluster
/// inside box(center, max_radius). arm_event(center, r, omega) holds iff
/// arm_reach(center, max_radius, omega) >= r for every r <= max_radius.
int arm_reach(Vertex center, int max_radius, const Configuration& omega);

/// Number of open edges in the open cluster of `v` within `rect`, ignoring
/// `excluding` (an index into omega's edge order) if given.
std::size_t cluster_edge_count(Vertex v, const Rect& rect, const Configuration& omega,
                               std::optional<std::size_t> excluding = std::nullopt);

/// Labels primal vertices of `rect` by open-cluster root, with two virtual
/// nodes for the left and right sides. `excluded` is skipped.
class PrimalClusters {
 public:
  PrimalClusters(const Rect& rect, const Configuration& omega, std::size_t excluded = npos);

  std::size_t left() const { return rect_.vertex_count(); }
  std::size_t right() const { return rect_.vertex_count() + 1; }
  std::size_t node(Vertex v) const { return rect_.vertex_index(v); }
  bool crossing() { return sets_.same(left(), right()); }
  bool touches_left(Vertex v) { return sets_.same(node(v), left()); }
  bool touches_right(Vertex v) { return sets_.same(node(v), right()); }
  DisjointSets& sets() { return sets_; }

 private:
  Rect rect_;
  DisjointSets sets_;
};

/// Labels dual vertices of `dual` by closed-primal cluster root, with virtual
/// nodes for the top and bottom rows. Dual edge `excluded` is skipped and
/// dual edge `forced` is used regardless of its primal state.
class DualClusters {
 public:
  DualClusters(const DualGraph& dual, const Configuration& omega, std::size_t excluded = npos,
               std::size_t forced = npos);

  std::size_t top() const { return count_; }
  std::size_t bottom() const { return count_ + 1; }
  bool crossing() { return sets_.same(top(), bottom()); }
  DisjointSets& sets() { return sets_; }

 private:
  std::size_t count_;
  DisjointSets sets_;
};

}  // namespace percolab
