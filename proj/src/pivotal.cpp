#include "percolab/pivotal.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace percolab {

namespace {

void require_exact(const Rect& rect, const Configuration& omega) {
  if (!(omega.rect() == rect)) {
    throw std::invalid_argument("configuration lives on " + format_rect(omega.rect()) +
                                ", expected " + format_rect(rect));
  }
}

bool ends_meet_sides(PrimalClusters& clusters, Vertex u, Vertex v) {
  return (clusters.touches_left(u) && clusters.touches_right(v)) ||
         (clusters.touches_left(v) && clusters.touches_right(u));
}

bool ends_meet_rows(DualClusters& clusters, std::size_t a, std::size_t b) {
  auto& s = clusters.sets();
  return (s.same(a, clusters.top()) && s.same(b, clusters.bottom())) ||
         (s.same(b, clusters.top()) && s.same(a, clusters.bottom()));
}

}  // namespace

PivotalWitness is_pivotal(const EventId& event, const Configuration& omega, std::size_t e) {
  DisjointSets scratch;
  PivotalWitness w;
  w.edge = e;
  w.holds_plus = evaluate(event, flip(omega, e, EdgeState::open), scratch);
  w.holds_minus = evaluate(event, flip(omega, e, EdgeState::closed), scratch);
  return w;
}

std::vector<std::size_t> PivotalFinder::find(const Configuration& omega) const {
  require_exact(rect_, omega);
  std::vector<std::size_t> out;
  PrimalClusters primal(rect_, omega);
  if (primal.crossing()) {
    // Only open edges can matter; e is pivotal iff adding e* closes a dual
    // top-bottom path.
    DualClusters dual(dual_, omega);
    for (const DualEdge& d : dual_.edges())
      if (omega.is_open(d.primal) && ends_meet_rows(dual, d.a, d.b)) out.push_back(d.primal);
    std::sort(out.begin(), out.end());
  } else {
    for (std::size_t i = 0; i < omega.size(); ++i) {
      if (omega.is_open(i)) continue;
      const Edge e = rect_.edge_at(i);
      if (ends_meet_sides(primal, e.origin, e.head())) out.push_back(i);
    }
  }
  return out;
}

std::vector<std::size_t> pivotal_set(const Rect& rect, const Configuration& omega) {
  return PivotalFinder(rect).find(omega);
}

std::vector<std::size_t> pivotal_set_by_definition(const Rect& rect, const Configuration& omega) {
  require_exact(rect, omega);
  const EventId event = HorizontalCrossing{rect};
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < omega.size(); ++i)
    if (is_pivotal(event, omega, i).pivotal()) out.push_back(i);
  return out;
}

std::string PivotalStructure::describe() const {
  std::ostringstream os;
  os << "edge " << edge << ": primal_arms=" << primal_arms << " dual_arms=" << dual_arms
     << " longest_arm=" << longest_arm_edges << " (need " << arm_bound << ")"
     << " dual_component=" << dual_component_edges << " (need " << dual_bound << ")";
  return os.str();
}

PivotalStructure check_pivotal_structure(const Rect& rect, const Configuration& omega, std::size_t e) {
  require_exact(rect, omega);
  if (!is_pivotal(HorizontalCrossing{rect}, omega, e).pivotal())
    throw std::invalid_argument("edge " + std::to_string(e) + " is not pivotal");

  PivotalStructure report;
  report.edge = e;
  report.arm_bound = static_cast<std::size_t>(rect.k() / 2);  // ceil((k-1)/2)
  report.dual_bound = static_cast<std::size_t>(rect.l() + 1);

  const Edge edge = rect.edge_at(e);
  const Vertex u = edge.origin;
  const Vertex v = edge.head();

  PrimalClusters without(rect, omega, e);
  report.primal_arms = ends_meet_sides(without, u, v);
  report.longest_arm_edges =
      std::max(cluster_edge_count(u, rect, omega, e), cluster_edge_count(v, rect, omega, e));

  const DualGraph dual(rect);
  const std::size_t d = dual.dual_of(e);
  if (d == npos) return report;  // a pivotal edge always has a dual partner
  const DualEdge star = dual.edges()[d];

  DualClusters rows(dual, omega, d);
  report.dual_arms = ends_meet_rows(rows, star.a, star.b);

  // Component of e* in the dual of omega with e closed, without the virtual
  // row nodes so that the count is a genuine connected subgraph.
  const Configuration minus = flip(omega, e, EdgeState::closed);
  DisjointSets plain(dual.vertex_count());
  for (const DualEdge& de : dual.edges())
    if (!minus.is_open(de.primal)) plain.unite(de.a, de.b);
  for (const DualEdge& de : dual.edges())
    if (!minus.is_open(de.primal) && plain.same(de.a, star.a)) ++report.dual_component_edges;
  return report;
}

}  // namespace percolab
