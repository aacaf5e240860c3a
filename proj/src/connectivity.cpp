#include "percolab/connectivity.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace percolab {

void DisjointSets::reset(std::size_t n) {
  parent_.resize(n);
  size_.assign(n, 1);
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require_inside(const Rect& inner, const Configuration& omega) {
  if (!omega.rect().contains(inner)) {
    throw std::invalid_argument("configuration on " + format_rect(omega.rect()) +
                                " does not cover " + format_rect(inner));
  }
}

void build_primal(const Rect& rect, const Configuration& omega, DisjointSets& sets,
                  std::size_t excluded) {
  const Rect& outer = omega.rect();
  const std::size_t left = rect.vertex_count();
  const std::size_t right = left + 1;
  sets.reset(rect.vertex_count() + 2);
  for (int y = rect.y0(); y <= rect.y1(); ++y) {
    sets.unite(rect.vertex_index({rect.x0(), y}), left);
    sets.unite(rect.vertex_index({rect.x1(), y}), right);
  }
  for (int y = rect.y0(); y <= rect.y1(); ++y) {
    for (int x = rect.x0(); x < rect.x1(); ++x) {
      const std::size_t i = outer.horizontal_index(x, y);
      if (i != excluded && omega.is_open(i))
        sets.unite(rect.vertex_index({x, y}), rect.vertex_index({x + 1, y}));
    }
  }
  for (int y = rect.y0(); y < rect.y1(); ++y) {
    for (int x = rect.x0(); x <= rect.x1(); ++x) {
      const std::size_t i = outer.vertical_index(x, y);
      if (i != excluded && omega.is_open(i))
        sets.unite(rect.vertex_index({x, y}), rect.vertex_index({x, y + 1}));
    }
  }
}

// Searches the open cluster of `center` inside box(center, radius); returns
// the largest L-infinity distance seen, stopping early once `radius` is hit.
int reach_within(Vertex center, int radius, const Configuration& omega) {
  if (radius <= 0) return 0;
  const Rect b = box(center, radius);
  require_inside(b, omega);
  const Rect& outer = omega.rect();
  std::vector<char> seen(b.vertex_count(), 0);
  std::vector<Vertex> stack{center};
  seen[b.vertex_index(center)] = 1;
  int best = 0;
  auto visit = [&](Vertex w, std::size_t edge) {
    if (!omega.is_open(edge)) return;
    auto& s = seen[b.vertex_index(w)];
    if (s) return;
    s = 1;
    stack.push_back(w);
  };
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    best = std::max(best, std::max(std::abs(v.x - center.x), std::abs(v.y - center.y)));
    if (best >= radius) return radius;
    if (v.x < b.x1()) visit({v.x + 1, v.y}, outer.horizontal_index(v.x, v.y));
    if (v.x > b.x0()) visit({v.x - 1, v.y}, outer.horizontal_index(v.x - 1, v.y));
    if (v.y < b.y1()) visit({v.x, v.y + 1}, outer.vertical_index(v.x, v.y));
    if (v.y > b.y0()) visit({v.x, v.y - 1}, outer.vertical_index(v.x, v.y - 1));
  }
  return best;
}

}  // namespace

Monotonicity monotonicity(const EventId& event) {
  return std::holds_alternative<VerticalDualCrossing>(event) ? Monotonicity::decreasing
                                                             : Monotonicity::increasing;
}

std::string event_name(const EventId& event) {
  return std::visit(overloaded{[](const HorizontalCrossing&) { return std::string("crossing"); },
                               [](const VerticalDualCrossing&) { return std::string("dual-crossing"); },
                               [](const Arm&) { return std::string("arm"); }},
                    event);
}

Rect support(const EventId& event) {
  return std::visit(overloaded{[](const HorizontalCrossing& h) { return h.rect; },
                               [](const VerticalDualCrossing& v) { return v.rect; },
                               [](const Arm& a) { return box(a.center, std::max(a.radius, 1)); }},
                    event);
}

bool evaluate(const EventId& event, const Configuration& omega) {
  DisjointSets scratch;
  return evaluate(event, omega, scratch);
}

bool evaluate(const EventId& event, const Configuration& omega, DisjointSets& scratch) {
  return std::visit(
      overloaded{
          [&](const HorizontalCrossing& h) { return has_horizontal_crossing(h.rect, omega, scratch); },
          [&](const VerticalDualCrossing& v) {
            return has_vertical_dual_crossing(v.rect, omega, scratch);
          },
          [&](const Arm& a) { return arm_event(a.center, a.radius, omega); }},
      event);
}

bool has_horizontal_crossing(const Rect& rect, const Configuration& omega) {
  DisjointSets scratch;
  return has_horizontal_crossing(rect, omega, scratch);
}

bool has_horizontal_crossing(const Rect& rect, const Configuration& omega, DisjointSets& scratch) {
  require_inside(rect, omega);
  build_primal(rect, omega, scratch, npos);
  return scratch.same(rect.vertex_count(), rect.vertex_count() + 1);
}

bool has_vertical_dual_crossing(const Rect& rect, const Configuration& omega) {
  DisjointSets scratch;
  return has_vertical_dual_crossing(rect, omega, scratch);
}

bool has_vertical_dual_crossing(const Rect& rect, const Configuration& omega,
                                DisjointSets& scratch) {
  require_inside(rect, omega);
  const Rect& outer = omega.rect();
  const auto k = static_cast<std::size_t>(rect.k());
  const std::size_t count = k * static_cast<std::size_t>(rect.l() + 2);
  const std::size_t top = count;
  const std::size_t bottom = count + 1;
  auto face = [&](int x, int y) {
    return static_cast<std::size_t>(y - rect.y0() + 1) * k + static_cast<std::size_t>(x - rect.x0());
  };
  scratch.reset(count + 2);
  for (std::size_t c = 0; c < k; ++c) {
    scratch.unite(c, bottom);
    scratch.unite(count - k + c, top);
  }
  for (int y = rect.y0(); y <= rect.y1(); ++y)
    for (int x = rect.x0(); x < rect.x1(); ++x)
      if (!omega.is_open(outer.horizontal_index(x, y))) scratch.unite(face(x, y - 1), face(x, y));
  for (int y = rect.y0(); y < rect.y1(); ++y)
    for (int x = rect.x0() + 1; x < rect.x1(); ++x)
      if (!omega.is_open(outer.vertical_index(x, y))) scratch.unite(face(x - 1, y), face(x, y));
  return scratch.same(top, bottom);
}

bool arm_event(Vertex center, int radius, const Configuration& omega) {
  if (radius <= 0) return true;
  return reach_within(center, radius, omega) >= radius;
}

int arm_reach(Vertex center, int max_radius, const Configuration& omega) {
  return reach_within(center, max_radius, omega);
}

std::size_t cluster_edge_count(Vertex v, const Rect& rect, const Configuration& omega,
                               std::optional<std::size_t> excluding) {
  require_inside(rect, omega);
  if (!rect.contains(v)) throw std::invalid_argument("vertex outside rectangle");
  const Rect& outer = omega.rect();
  const std::size_t skip = excluding.value_or(npos);
  auto usable = [&](std::size_t i) { return i != skip && omega.is_open(i); };

  std::vector<char> seen(rect.vertex_count(), 0);
  std::vector<Vertex> stack{v};
  seen[rect.vertex_index(v)] = 1;
  std::size_t edges = 0;
  auto visit = [&](Vertex w) {
    auto& s = seen[rect.vertex_index(w)];
    if (!s) {
      s = 1;
      stack.push_back(w);
    }
  };
  while (!stack.empty()) {
    const Vertex u = stack.back();
    stack.pop_back();
    // Each edge is counted once, from its left/lower endpoint.
    if (u.x < rect.x1() && usable(outer.horizontal_index(u.x, u.y))) {
      ++edges;
      visit({u.x + 1, u.y});
    }
    if (u.y < rect.y1() && usable(outer.vertical_index(u.x, u.y))) {
      ++edges;
      visit({u.x, u.y + 1});
    }
    if (u.x > rect.x0() && usable(outer.horizontal_index(u.x - 1, u.y))) visit({u.x - 1, u.y});
    if (u.y > rect.y0() && usable(outer.vertical_index(u.x, u.y - 1))) visit({u.x, u.y - 1});
  }
  return edges;
}

PrimalClusters::PrimalClusters(const Rect& rect, const Configuration& omega, std::size_t excluded)
    : rect_(rect) {
  require_inside(rect, omega);
  build_primal(rect, omega, sets_, excluded);
}

DualClusters::DualClusters(const DualGraph& dual, const Configuration& omega, std::size_t excluded,
                           std::size_t forced)
    : count_(dual.vertex_count()), sets_(dual.vertex_count() + 2) {
  const Rect& rect = dual.rect();
  require_inside(rect, omega);
  const Rect& outer = omega.rect();
  const bool same_rect = outer == rect;
  const auto k = static_cast<std::size_t>(rect.k());
  for (std::size_t c = 0; c < k; ++c) {
    sets_.unite(c, bottom());
    sets_.unite(count_ - k + c, top());
  }
  const auto edges = dual.edges();
  for (std::size_t d = 0; d < edges.size(); ++d) {
    if (d == excluded) continue;
    const std::size_t primal =
        same_rect ? edges[d].primal : *outer.index_of(rect.edge_at(edges[d].primal));
    if (d == forced || !omega.is_open(primal)) sets_.unite(edges[d].a, edges[d].b);
  }
}

}  // namespace percolab
