#include <cstdlib>
#include <deque>
#include <stdexcept>

#include "doctest.h"
#include "percolab/connectivity.hpp"

using namespace percolab;

namespace {

// Plain BFS over open edges; returns the distance (in edges) from the left
// side to each vertex, or -1 when unreachable.
std::vector<int> left_distances(const Rect& r, const Configuration& omega) {
  std::vector<int> dist(r.vertex_count(), -1);
  std::deque<Vertex> queue;
  for (Vertex v : r.side_vertices(Side::left)) {
    dist[r.vertex_index(v)] = 0;
    queue.push_back(v);
  }
  while (!queue.empty()) {
    const Vertex v = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < r.edge_count(); ++i) {
      if (!omega.is_open(i)) continue;
      const Edge e = r.edge_at(i);
      Vertex w;
      if (e.origin == v)
        w = e.head();
      else if (e.head() == v)
        w = e.origin;
      else
        continue;
      if (dist[r.vertex_index(w)] < 0) {
        dist[r.vertex_index(w)] = dist[r.vertex_index(v)] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

bool bfs_crossing(const Rect& r, const Configuration& omega) {
  const auto dist = left_distances(r, omega);
  for (Vertex v : r.side_vertices(Side::right))
    if (dist[r.vertex_index(v)] >= 0) return true;
  return false;
}

// Dual BFS on face centers, built directly from the geometry rather than DualGraph.
bool bfs_dual_crossing(const Rect& r, const Configuration& omega) {
  const int rows = r.l() + 2;
  auto id = [&](int x, int y) { return (y - (r.y0() - 1)) * r.k() + (x - r.x0()); };
  std::vector<char> seen(static_cast<std::size_t>(r.k() * rows), 0);
  std::deque<Vertex> queue;
  for (int x = r.x0(); x < r.x1(); ++x) {
    seen[id(x, r.y0() - 1)] = 1;
    queue.push_back({x, r.y0() - 1});
  }
  auto closed = [&](const Edge& e) { return !omega.is_open(*r.index_of(e)); };
  while (!queue.empty()) {
    const Vertex f = queue.front();
    queue.pop_front();
    if (f.y == r.y1()) return true;
    auto visit = [&](int x, int y) {
      if (!seen[id(x, y)]) {
        seen[id(x, y)] = 1;
        queue.push_back({x, y});
      }
    };
    // Up/down across the horizontal primal edge (f.x, f.y+1) / (f.x, f.y).
    if (f.y + 1 <= r.y1() && closed(Edge{{f.x, f.y + 1}, Orientation::horizontal}))
      visit(f.x, f.y + 1);
    if (f.y - 1 >= r.y0() - 1 && closed(Edge{{f.x, f.y}, Orientation::horizontal}))
      visit(f.x, f.y - 1);
    // Sideways across interior vertical edges, only in the rows inside the rectangle.
    if (f.y >= r.y0() && f.y < r.y1()) {
      if (f.x + 1 < r.x1() && closed(Edge{{f.x + 1, f.y}, Orientation::vertical}))
        visit(f.x + 1, f.y);
      if (f.x - 1 >= r.x0() && closed(Edge{{f.x, f.y}, Orientation::vertical}))
        visit(f.x - 1, f.y);
    }
  }
  return false;
}

}  // namespace

TEST_CASE("disjoint sets") {
  DisjointSets s(6);
  CHECK(s.unite(0, 1));
  CHECK_FALSE(s.unite(1, 0));
  CHECK(s.unite(2, 3));
  CHECK(s.unite(1, 3));
  CHECK(s.same(0, 2));
  CHECK_FALSE(s.same(0, 4));
  CHECK(s.component_size(3) == 4);
  CHECK(s.component_size(5) == 1);
  s.reset(3);
  CHECK(s.universe() == 3);
  CHECK_FALSE(s.same(0, 1));
}

TEST_CASE("horizontal crossing examples") {
  for (const Rect r : {Rect(1, 1), Rect(3, 2), Rect(5, 1)}) {
    CHECK(has_horizontal_crossing(r, Configuration::all_open(r)));
    CHECK_FALSE(has_horizontal_crossing(r, Configuration::all_closed(r)));
    CHECK(has_vertical_dual_crossing(r, Configuration::all_closed(r)));
    CHECK_FALSE(has_vertical_dual_crossing(r, Configuration::all_open(r)));
  }
  const Rect unit(1, 1);
  CHECK(has_horizontal_crossing(unit, Configuration::from_mask(unit, 0b0001)));   // bottom
  CHECK_FALSE(has_horizontal_crossing(unit, Configuration::from_mask(unit, 0b0100)));  // left
  for (std::uint64_t m = 0; m < 16; ++m) {
    const auto omega = Configuration::from_mask(unit, m);
    CHECK(has_horizontal_crossing(unit, omega) == ((m & 0b0011) != 0));
    CHECK(has_vertical_dual_crossing(unit, omega) == ((m & 0b0011) == 0));
  }
}

TEST_CASE("crossing queries against BFS, exhaustively") {
  for (const Rect r : {Rect(1, 1), Rect(2, 1), Rect(3, 1), Rect(1, 2), Rect(2, 2), Rect(3, 2)}) {
    DisjointSets scratch;
    for (std::uint64_t m = 0; m < (1ULL << r.edge_count()); ++m) {
      const auto omega = Configuration::from_mask(r, m);
      const bool h = has_horizontal_crossing(r, omega, scratch);
      const bool v = has_vertical_dual_crossing(r, omega, scratch);
      REQUIRE(h == bfs_crossing(r, omega));
      REQUIRE(v == bfs_dual_crossing(r, omega));
      REQUIRE(h != v);
    }
  }
}

TEST_CASE("crossing queries against BFS on random configurations") {
  const Rect r(16, 16);
  DisjointSets scratch;
  for (double p : {0.4, 0.5, 0.6}) {
    for (std::uint64_t s = 0; s < 300; ++s) {
      const auto omega = sample(r, p, RngSpec{31}, s);
      const bool h = has_horizontal_crossing(r, omega, scratch);
      CHECK(h == bfs_crossing(r, omega));
      CHECK(has_vertical_dual_crossing(r, omega, scratch) == bfs_dual_crossing(r, omega));
      CHECK(h != has_vertical_dual_crossing(r, omega));
    }
  }
}

TEST_CASE("a crossing uses at least k edges") {
  const Rect r(10, 6);
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto omega = sample(r, 0.6, RngSpec{3}, s);
    if (!has_horizontal_crossing(r, omega)) continue;
    const auto dist = left_distances(r, omega);
    for (Vertex v : r.side_vertices(Side::right)) {
      const int d = dist[r.vertex_index(v)];
      if (d >= 0) CHECK(d >= r.k());
    }
  }
}

TEST_CASE("crossings are monotone under the coupling") {
  const Rect r(12, 8);
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto labels = sample_labels(r, RngSpec{8}, s);
    bool prev_h = false;
    bool prev_v = true;
    for (double p = 0.0; p <= 1.0; p += 0.05) {
      const auto omega = labels.threshold(p);
      const bool h = has_horizontal_crossing(r, omega);
      const bool v = has_vertical_dual_crossing(r, omega);
      CHECK((h || !prev_h));
      CHECK((!v || prev_v));
      prev_h = h;
      prev_v = v;
    }
  }
}

TEST_CASE("sub-rectangle queries read only the sub-rectangle") {
  const Rect big(-2, -2, 10, 9);
  const Rect sub(1, 0, 4, 3);
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto omega = sample(big, 0.5, RngSpec{4}, s);
    Configuration local(sub);
    for (std::size_t i = 0; i < sub.edge_count(); ++i)
      local.set(i, omega.is_open(*big.index_of(sub.edge_at(i))));
    CHECK(has_horizontal_crossing(sub, omega) == has_horizontal_crossing(sub, local));
    CHECK(has_vertical_dual_crossing(sub, omega) == has_vertical_dual_crossing(sub, local));
  }
  CHECK_THROWS_AS(has_horizontal_crossing(big, Configuration(sub)), std::invalid_argument);
}

TEST_CASE("evaluate dispatches on the event") {
  const Rect r(3, 2);
  const auto omega = sample(r, 0.5, RngSpec{1}, 0);
  CHECK(evaluate(HorizontalCrossing{r}, omega) == has_horizontal_crossing(r, omega));
  CHECK(evaluate(VerticalDualCrossing{r}, omega) == has_vertical_dual_crossing(r, omega));
  CHECK(monotonicity(HorizontalCrossing{r}) == Monotonicity::increasing);
  CHECK(monotonicity(VerticalDualCrossing{r}) == Monotonicity::decreasing);
  CHECK(monotonicity(Arm{{0, 0}, 3}) == Monotonicity::increasing);
  CHECK(event_name(Arm{{0, 0}, 3}) == "arm");
  CHECK(support(Arm{{1, 2}, 3}) == box({1, 2}, 3));
}

TEST_CASE("arm events") {
  const Rect b = box({0, 0}, 6);
  CHECK(arm_event({0, 0}, 0, Configuration::all_closed(b)));
  for (int r = 1; r <= 6; ++r) {
    CHECK(arm_event({0, 0}, r, Configuration::all_open(b)));
    CHECK_FALSE(arm_event({0, 0}, r, Configuration::all_closed(b)));
  }
  // A straight open path to the right reaches exactly its length.
  auto omega = Configuration::all_closed(b);
  for (int x = 0; x < 4; ++x) omega.set(b.horizontal_index(x, 0), true);
  CHECK(arm_reach({0, 0}, 6, omega) == 4);
  CHECK(arm_event({0, 0}, 4, omega));
  CHECK_FALSE(arm_event({0, 0}, 5, omega));

  for (std::uint64_t s = 0; s < 300; ++s) {
    const auto w = sample(b, 0.5, RngSpec{12}, s);
    const int reach = arm_reach({0, 0}, 6, w);
    for (int r = 0; r <= 6; ++r) {
      const bool holds = arm_event({0, 0}, r, w);
      CHECK(holds == (reach >= r));
      if (r > 0 && holds) CHECK(arm_event({0, 0}, r - 1, w));
    }
  }
}

TEST_CASE("cluster edge counts") {
  const Rect unit(1, 1);
  CHECK(cluster_edge_count({0, 0}, unit, Configuration::all_closed(unit)) == 0);
  // bottom (0) and left (2) open: the L-shaped pair.
  CHECK(cluster_edge_count({0, 0}, unit, Configuration::from_mask(unit, 0b0101)) == 2);
  for (Vertex v : {Vertex{0, 0}, Vertex{1, 0}, Vertex{0, 1}, Vertex{1, 1}})
    CHECK(cluster_edge_count(v, unit, Configuration::all_open(unit)) == 4);
  CHECK(cluster_edge_count({0, 0}, unit, Configuration::all_open(unit), 0) == 3);

  const Rect r(6, 4);
  const auto omega = sample(r, 0.5, RngSpec{2}, 7);
  for (std::size_t i = 0; i < r.vertex_count(); ++i) {
    const Vertex v = r.vertex_at(i);
    CHECK(cluster_edge_count(v, r, omega) <= omega.open_count());
  }
}

TEST_CASE("cluster labelling") {
  const Rect r(7, 5);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto omega = sample(r, 0.5, RngSpec{6}, s);
    PrimalClusters primal(r, omega);
    CHECK(primal.crossing() == has_horizontal_crossing(r, omega));
    DualClusters dual(DualGraph(r), omega);
    CHECK(dual.crossing() == has_vertical_dual_crossing(r, omega));
  }
}
