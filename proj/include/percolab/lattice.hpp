#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace percolab {

struct Vertex {
  int x = 0;
  int y = 0;

  auto operator<=>(const Vertex&) const = default;
};

enum class Orientation : std::uint8_t { horizontal, vertical };

enum class Side : std::uint8_t { left, right, top, bottom };

/// A nearest-neighbour edge of Z^2, identified by its lower-left endpoint.
/// Horizontal edges join (x,y)-(x+1,y); vertical edges join (x,y)-(x,y+1).
struct Edge {
  Vertex origin;
  Orientation orientation = Orientation::horizontal;

  Vertex head() const {
    return orientation == Orientation::horizontal ? Vertex{origin.x + 1, origin.y}
                                                  : Vertex{origin.x, origin.y + 1};
  }

  auto operator<=>(const Edge&) const = default;
};

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

/// Closed integer rectangle [x0, x0+k] x [y0, y0+l] viewed as a subgraph of Z^2.
///
/// Edges are indexed canonically: the k(l+1) horizontal edges first, row by
/// row from the bottom and left to right within a row, then the (k+1)l
/// vertical edges in the same row-major order.
class Rect {
 public:
  Rect(int k, int l) : Rect(0, 0, k, l) {}
  Rect(int x0, int y0, int k, int l);

  int x0() const { return x0_; }
  int y0() const { return y0_; }
  int x1() const { return x0_ + k_; }
  int y1() const { return y0_ + l_; }
  int k() const { return k_; }
  int l() const { return l_; }

  std::size_t vertex_count() const {
    return static_cast<std::size_t>(k_ + 1) * static_cast<std::size_t>(l_ + 1);
  }
  std::size_t horizontal_edge_count() const {
    return static_cast<std::size_t>(k_) * static_cast<std::size_t>(l_ + 1);
  }
  std::size_t vertical_edge_count() const {
    return static_cast<std::size_t>(k_ + 1) * static_cast<std::size_t>(l_);
  }
  std::size_t edge_count() const { return horizontal_edge_count() + vertical_edge_count(); }

  bool contains(Vertex v) const {
    return v.x >= x0_ && v.x <= x1() && v.y >= y0_ && v.y <= y1();
  }
  bool contains(const Edge& e) const { return contains(e.origin) && contains(e.head()); }
  bool contains(const Rect& other) const {
    return other.x0_ >= x0_ && other.x1() <= x1() && other.y0_ >= y0_ && other.y1() <= y1();
  }

  // Unchecked index arithmetic for the hot loops; callers guarantee containment.
  std::size_t vertex_index(Vertex v) const {
    return static_cast<std::size_t>(v.y - y0_) * static_cast<std::size_t>(k_ + 1) +
           static_cast<std::size_t>(v.x - x0_);
  }
  std::size_t horizontal_index(int x, int y) const {
    return static_cast<std::size_t>(y - y0_) * static_cast<std::size_t>(k_) +
           static_cast<std::size_t>(x - x0_);
  }
  std::size_t vertical_index(int x, int y) const {
    return horizontal_edge_count() +
           static_cast<std::size_t>(y - y0_) * static_cast<std::size_t>(k_ + 1) +
           static_cast<std::size_t>(x - x0_);
  }

  Vertex vertex_at(std::size_t index) const;
  Edge edge_at(std::size_t index) const;
  std::optional<std::size_t> index_of(const Edge& e) const;

  std::vector<Edge> edges() const;
  std::vector<Vertex> side_vertices(Side side) const;
  bool on_side(Vertex v, Side side) const;
  int degree(Vertex v) const;

  bool operator==(const Rect&) const = default;

 private:
  int x0_;
  int y0_;
  int k_;
  int l_;
};

std::vector<Edge> edges_of(const Rect& rect);
std::vector<Vertex> side_vertices(const Rect& rect, Side side);

/// Box of L-infinity radius `radius` about `center`.
Rect box(Vertex center, int radius);

/// Parses "KxL" or "KxL@X,Y". Throws std::invalid_argument on malformed text.
Rect parse_rect(std::string_view text);
std::string format_rect(const Rect& rect);

struct DualEdge {
  std::size_t a = 0;  // lower/left dual vertex
  std::size_t b = 0;  // upper/right dual vertex
  std::size_t primal = 0;
};

/// Dual of a rectangle: one vertex per face center (x+1/2, y+1/2) for
/// x0 <= x < x0+k and y0-1 <= y <= y0+l, stored as the integer pair (x, y).
/// The rows y0-1 and y0+l are the bottom and top dual boundary rows.
/// A dual edge e* is open exactly when its primal partner e is closed.
class DualGraph {
 public:
  explicit DualGraph(const Rect& rect);

  const Rect& rect() const { return rect_; }
  std::size_t vertex_count() const {
    return static_cast<std::size_t>(rect_.k()) * static_cast<std::size_t>(rect_.l() + 2);
  }
  std::size_t vertex_index(Vertex face) const {
    return static_cast<std::size_t>(face.y - (rect_.y0() - 1)) *
               static_cast<std::size_t>(rect_.k()) +
           static_cast<std::size_t>(face.x - rect_.x0());
  }
  Vertex vertex_at(std::size_t index) const;

  std::span<const DualEdge> edges() const { return edges_; }

  /// Index into edges() of the dual partner of primal edge `primal`, or npos
  /// for vertical edges on the left/right boundary columns.
  std::size_t dual_of(std::size_t primal) const { return dual_of_[primal]; }

  bool is_top(std::size_t v) const { return v >= vertex_count() - static_cast<std::size_t>(rect_.k()); }
  bool is_bottom(std::size_t v) const { return v < static_cast<std::size_t>(rect_.k()); }
  std::vector<std::size_t> top_row() const;
  std::vector<std::size_t> bottom_row() const;

 private:
  Rect rect_;
  std::vector<DualEdge> edges_;
  std::vector<std::size_t> dual_of_;
};

DualGraph dual_graph(const Rect& rect);

}  // namespace percolab
