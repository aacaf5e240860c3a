#include "percolab/lattice.hpp"

#include <charconv>
#include <stdexcept>

namespace percolab {

Rect::Rect(int x0, int y0, int k, int l) : x0_(x0), y0_(y0), k_(k), l_(l) {
  if (k < 1 || l < 1) {
    throw std::invalid_argument("rectangle needs k >= 1 and l >= 1, got " + std::to_string(k) +
                                "x" + std::to_string(l));
  }
}

Vertex Rect::vertex_at(std::size_t index) const {
  const auto row = static_cast<int>(index / static_cast<std::size_t>(k_ + 1));
  const auto col = static_cast<int>(index % static_cast<std::size_t>(k_ + 1));
  return {x0_ + col, y0_ + row};
}

Edge Rect::edge_at(std::size_t index) const {
  if (index >= edge_count()) {
    throw std::out_of_range("edge index " + std::to_string(index) + " outside [0, " +
                            std::to_string(edge_count()) + ")");
  }
  const std::size_t h = horizontal_edge_count();
  if (index < h) {
    const auto row = static_cast<int>(index / static_cast<std::size_t>(k_));
    const auto col = static_cast<int>(index % static_cast<std::size_t>(k_));
    return {{x0_ + col, y0_ + row}, Orientation::horizontal};
  }
  index -= h;
  const auto row = static_cast<int>(index / static_cast<std::size_t>(k_ + 1));
  const auto col = static_cast<int>(index % static_cast<std::size_t>(k_ + 1));
  return {{x0_ + col, y0_ + row}, Orientation::vertical};
}

std::optional<std::size_t> Rect::index_of(const Edge& e) const {
  if (!contains(e)) return std::nullopt;
  return e.orientation == Orientation::horizontal ? horizontal_index(e.origin.x, e.origin.y)
                                                  : vertical_index(e.origin.x, e.origin.y);
}

std::vector<Edge> Rect::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (int y = y0_; y <= y1(); ++y)
    for (int x = x0_; x < x1(); ++x) out.push_back({{x, y}, Orientation::horizontal});
  for (int y = y0_; y < y1(); ++y)
    for (int x = x0_; x <= x1(); ++x) out.push_back({{x, y}, Orientation::vertical});
  return out;
}

std::vector<Vertex> Rect::side_vertices(Side side) const {
  std::vector<Vertex> out;
  switch (side) {
    case Side::left:
      for (int y = y0_; y <= y1(); ++y) out.push_back({x0_, y});
      break;
    case Side::right:
      for (int y = y0_; y <= y1(); ++y) out.push_back({x1(), y});
      break;
    case Side::bottom:
      for (int x = x0_; x <= x1(); ++x) out.push_back({x, y0_});
      break;
    case Side::top:
      for (int x = x0_; x <= x1(); ++x) out.push_back({x, y1()});
      break;
  }
  return out;
}

bool Rect::on_side(Vertex v, Side side) const {
  if (!contains(v)) return false;
  switch (side) {
    case Side::left: return v.x == x0_;
    case Side::right: return v.x == x1();
    case Side::bottom: return v.y == y0_;
    case Side::top: return v.y == y1();
  }
  return false;
}

int Rect::degree(Vertex v) const {
  if (!contains(v)) return 0;
  return (v.x > x0_) + (v.x < x1()) + (v.y > y0_) + (v.y < y1());
}

std::vector<Edge> edges_of(const Rect& rect) { return rect.edges(); }

std::vector<Vertex> side_vertices(const Rect& rect, Side side) { return rect.side_vertices(side); }

Rect box(Vertex center, int radius) {
  return Rect(center.x - radius, center.y - radius, 2 * radius, 2 * radius);
}

namespace {

[[noreturn]] void malformed(std::string_view whole) {
  throw std::invalid_argument("malformed rectangle '" + std::string(whole) +
                              "', expected KxL or KxL@X,Y");
}

int parse_int(std::string_view text, std::string_view whole) {
  int value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last) malformed(whole);
  return value;
}

}  // namespace

Rect parse_rect(std::string_view text) {
  const auto at = text.find('@');
  const auto dims = text.substr(0, at);
  const auto cross = dims.find('x');
  if (cross == std::string_view::npos) malformed(text);
  const int k = parse_int(dims.substr(0, cross), text);
  const int l = parse_int(dims.substr(cross + 1), text);
  int x0 = 0;
  int y0 = 0;
  if (at != std::string_view::npos) {
    const auto origin = text.substr(at + 1);
    const auto comma = origin.find(',');
    if (comma == std::string_view::npos) malformed(text);
    x0 = parse_int(origin.substr(0, comma), text);
    y0 = parse_int(origin.substr(comma + 1), text);
  }
  return Rect(x0, y0, k, l);
}

std::string format_rect(const Rect& rect) {
  std::string out = std::to_string(rect.k()) + "x" + std::to_string(rect.l());
  if (rect.x0() != 0 || rect.y0() != 0)
    out += "@" + std::to_string(rect.x0()) + "," + std::to_string(rect.y0());
  return out;
}

DualGraph::DualGraph(const Rect& rect) : rect_(rect), dual_of_(rect.edge_count(), npos) {
  edges_.reserve(rect.horizontal_edge_count() +
                 static_cast<std::size_t>(rect.k() - 1) * static_cast<std::size_t>(rect.l()));
  for (std::size_t i = 0; i < rect.edge_count(); ++i) {
    const Edge e = rect.edge_at(i);
    const Vertex o = e.origin;
    if (e.orientation == Orientation::horizontal) {
      // Separates the face below from the face above.
      dual_of_[i] = edges_.size();
      edges_.push_back({vertex_index({o.x, o.y - 1}), vertex_index({o.x, o.y}), i});
    } else if (o.x > rect.x0() && o.x < rect.x1()) {
      // Separates the face to the left from the face to the right.
      dual_of_[i] = edges_.size();
      edges_.push_back({vertex_index({o.x - 1, o.y}), vertex_index({o.x, o.y}), i});
    }
  }
}

Vertex DualGraph::vertex_at(std::size_t index) const {
  const auto k = static_cast<std::size_t>(rect_.k());
  return {rect_.x0() + static_cast<int>(index % k), rect_.y0() - 1 + static_cast<int>(index / k)};
}

std::vector<std::size_t> DualGraph::top_row() const {
  std::vector<std::size_t> out;
  for (std::size_t v = vertex_count() - static_cast<std::size_t>(rect_.k()); v < vertex_count(); ++v)
    out.push_back(v);
  return out;
}

std::vector<std::size_t> DualGraph::bottom_row() const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < static_cast<std::size_t>(rect_.k()); ++v) out.push_back(v);
  return out;
}

DualGraph dual_graph(const Rect& rect) { return DualGraph(rect); }

}  // namespace percolab
