#include "percolab/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <utility>

#include "percolab/config.hpp"

namespace percolab::oracle {

EnumerationTooLarge::EnumerationTooLarge(std::size_t edges, std::size_t cap)
    : std::length_error("exhaustive enumeration limited to E <= " + std::to_string(cap) +
                        " edges, rectangle has E = " + std::to_string(edges)),
      edges_(edges),
      cap_(cap) {}

namespace {

void require_cap(const Rect& rect, std::size_t cap) {
  if (rect.edge_count() > cap) throw EnumerationTooLarge(rect.edge_count(), cap);
}

template <class Pred>
CrossingPolynomial enumerate(const Rect& rect, std::size_t cap, Pred&& holds) {
  require_cap(rect, cap);
  const std::size_t edges = rect.edge_count();
  CrossingPolynomial poly{rect, std::vector<std::uint64_t>(edges + 1, 0)};
  Configuration omega(rect);
  const std::uint64_t states = 1ULL << edges;
  for (std::uint64_t mask = 0; mask < states; ++mask) {
    omega.assign_mask(mask);
    if (holds(omega, mask)) ++poly.counts[static_cast<std::size_t>(std::popcount(mask))];
  }
  return poly;
}

struct SmallGraph {
  struct Arc {
    std::size_t to;
    std::size_t edge;  // primal edge index
  };
  std::vector<std::vector<Arc>> adjacency;
};

SmallGraph primal_graph(const Rect& rect) {
  SmallGraph g;
  g.adjacency.resize(rect.vertex_count());
  for (std::size_t i = 0; i < rect.edge_count(); ++i) {
    const Edge e = rect.edge_at(i);
    const std::size_t a = rect.vertex_index(e.origin);
    const std::size_t b = rect.vertex_index(e.head());
    g.adjacency[a].push_back({b, i});
    g.adjacency[b].push_back({a, i});
  }
  return g;
}

SmallGraph dual_small_graph(const DualGraph& dual) {
  SmallGraph g;
  g.adjacency.resize(dual.vertex_count());
  for (const DualEdge& d : dual.edges()) {
    g.adjacency[d.a].push_back({d.b, d.primal});
    g.adjacency[d.b].push_back({d.a, d.primal});
  }
  return g;
}

// Depth-first search over self-avoiding paths, cut off as soon as one of
// `length` edges is found. `usable` is a bit mask over primal edges.
bool path_at_least(const SmallGraph& g, std::size_t at, std::size_t length, std::uint64_t usable,
                   std::uint64_t visited) {
  if (length == 0) return true;
  visited |= 1ULL << at;
  for (const auto& arc : g.adjacency[at]) {
    if (!((usable >> arc.edge) & 1ULL) || ((visited >> arc.to) & 1ULL)) continue;
    if (path_at_least(g, arc.to, length - 1, usable, visited)) return true;
  }
  return false;
}

CrossingPolynomial path_event(const Rect& rect, const SmallGraph& g, std::size_t start,
                              std::size_t length, bool dual) {
  require_cap(rect, kIdentityEdgeCap);
  const std::size_t edges = rect.edge_count();
  CrossingPolynomial poly{rect, std::vector<std::uint64_t>(edges + 1, 0)};
  if (length == 0) {
    for (std::size_t j = 0; j <= edges; ++j)
      poly.counts[j] = static_cast<std::uint64_t>(binomial(edges, j));
    return poly;
  }
  if (length > edges) return poly;
  if (g.adjacency.size() > 64) throw std::length_error("path oracle needs at most 64 vertices");
  const std::uint64_t all = (edges == 64) ? ~0ULL : ((1ULL << edges) - 1);
  for (std::uint64_t mask = 0; mask <= all; ++mask) {
    const std::uint64_t usable = dual ? (~mask & all) : mask;
    if (path_at_least(g, start, length, usable, 0))
      ++poly.counts[static_cast<std::size_t>(std::popcount(mask))];
  }
  return poly;
}

Rational rational_power(const Rational& base, std::size_t exponent) {
  Rational out = 1;
  for (std::size_t i = 0; i < exponent; ++i) out *= base;
  return out;
}

}  // namespace

BigInt binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  BigInt out = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    out *= n - k + i;
    out /= i;
  }
  return out;
}

double CrossingPolynomial::evaluate(double p) const {
  const std::size_t edges = edge_count();
  double sum = 0.0;
  for (std::size_t j = 0; j <= edges; ++j) {
    if (counts[j] == 0) continue;
    sum += static_cast<double>(counts[j]) * std::pow(p, static_cast<double>(j)) *
           std::pow(1.0 - p, static_cast<double>(edges - j));
  }
  return sum;
}

Rational CrossingPolynomial::evaluate(const Rational& p) const {
  const std::size_t edges = edge_count();
  const Rational q = 1 - p;
  Rational sum = 0;
  for (std::size_t j = 0; j <= edges; ++j) {
    if (counts[j] == 0) continue;
    sum += Rational(counts[j]) * rational_power(p, j) * rational_power(q, edges - j);
  }
  return sum;
}

CrossingPolynomial CrossingPolynomial::complement() const {
  CrossingPolynomial out{rect, counts};
  const std::size_t edges = edge_count();
  for (std::size_t j = 0; j <= edges; ++j)
    out.counts[j] = static_cast<std::uint64_t>(binomial(edges, j)) - counts[j];
  return out;
}

std::vector<BigInt> CrossingPolynomial::monomial_coefficients() const {
  // p^j (1-p)^(E-j) = sum_i C(E-j, i) (-1)^i p^(j+i)
  const std::size_t edges = edge_count();
  std::vector<BigInt> out(edges + 1, 0);
  for (std::size_t j = 0; j <= edges; ++j) {
    if (counts[j] == 0) continue;
    for (std::size_t i = 0; i + j <= edges; ++i) {
      BigInt term = binomial(edges - j, i) * counts[j];
      if (i % 2) term = -term;
      out[i + j] += term;
    }
  }
  return out;
}

CrossingPolynomial exact_probability(const EventId& event, const Rect& rect) {
  require_cap(rect, kEventEdgeCap);
  if (!rect.contains(support(event)))
    throw std::invalid_argument("event reads edges outside " + format_rect(rect));
  DisjointSets scratch;
  return enumerate(rect, kEventEdgeCap, [&](const Configuration& omega, std::uint64_t) {
    return evaluate(event, omega, scratch);
  });
}

CrossingPolynomial exact_pivotal_probability(const Rect& rect, const Edge& e) {
  require_cap(rect, kEventEdgeCap);
  const std::size_t edges = rect.edge_count();
  CrossingPolynomial poly{rect, std::vector<std::uint64_t>(edges + 1, 0)};
  const auto index = rect.index_of(e);
  if (!index) return poly;
  const std::uint64_t bit = 1ULL << *index;
  DisjointSets scratch;
  Configuration omega(rect);
  const std::uint64_t states = 1ULL << edges;
  for (std::uint64_t mask = 0; mask < states; ++mask) {
    if (mask & bit) continue;
    omega.assign_mask(mask);
    const bool minus = has_horizontal_crossing(rect, omega, scratch);
    omega.assign_mask(mask | bit);
    const bool plus = has_horizontal_crossing(rect, omega, scratch);
    if (plus != minus) {
      // The pivotal event does not read edge e: both of its states count.
      const auto j = static_cast<std::size_t>(std::popcount(mask));
      ++poly.counts[j];
      ++poly.counts[j + 1];
    }
  }
  return poly;
}

RussoReport russo_derivative_check(const Rect& rect) {
  require_cap(rect, kIdentityEdgeCap);
  const std::size_t edges = rect.edge_count();
  const auto crossing = exact_probability(HorizontalCrossing{rect}, rect).monomial_coefficients();

  RussoReport report;
  report.derivative.assign(edges + 1, 0);
  for (std::size_t m = 0; m < edges; ++m) report.derivative[m] = crossing[m + 1] * (m + 1);

  report.pivotal_sum.assign(edges + 1, 0);
  for (const Edge& e : rect.edges()) {
    const auto coeffs = exact_pivotal_probability(rect, e).monomial_coefficients();
    for (std::size_t m = 0; m <= edges; ++m) report.pivotal_sum[m] += coeffs[m];
  }

  report.max_residual = 0;
  for (std::size_t m = 0; m <= edges; ++m) {
    BigInt diff = report.derivative[m] - report.pivotal_sum[m];
    if (diff < 0) diff = -diff;
    report.max_residual = std::max(report.max_residual, diff);
  }
  report.passed = report.max_residual == 0;
  return report;
}

CrossingPolynomial exact_path_event(const Rect& rect, Vertex v, std::size_t length) {
  if (!rect.contains(v)) throw std::invalid_argument("start vertex outside rectangle");
  return path_event(rect, primal_graph(rect), rect.vertex_index(v), length, false);
}

CrossingPolynomial exact_dual_path_event(const Rect& rect, std::size_t start, std::size_t length) {
  const DualGraph dual(rect);
  if (start >= dual.vertex_count()) throw std::invalid_argument("dual vertex out of range");
  return path_event(rect, dual_small_graph(dual), start, length, true);
}

bool InequalityReport::passed() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const InequalityRow& r) { return r.primal_ok && r.dual_ok; });
}

InequalityReport pivotal_inequality_check(const Rect& rect, std::size_t e,
                                          std::span<const Rational> grid) {
  require_cap(rect, kIdentityEdgeCap);
  const Edge edge = rect.edge_at(e);
  InequalityReport report;
  report.primal_length = static_cast<std::size_t>(rect.k() / 2);        // ceil((k-1)/2)
  report.dual_length = static_cast<std::size_t>((rect.l() + 1) / 2);    // ceil(l/2)

  const auto pivotal = exact_pivotal_probability(rect, edge);
  const auto from_origin = exact_path_event(rect, edge.origin, report.primal_length);
  const auto from_head = exact_path_event(rect, edge.head(), report.primal_length);

  const DualGraph dual(rect);
  const std::size_t d = dual.dual_of(e);
  std::vector<CrossingPolynomial> dual_arms;
  if (d != npos) {
    dual_arms.push_back(exact_dual_path_event(rect, dual.edges()[d].a, report.dual_length));
    dual_arms.push_back(exact_dual_path_event(rect, dual.edges()[d].b, report.dual_length));
  }

  for (const Rational& p : grid) {
    InequalityRow row;
    row.edge = e;
    row.p = p;
    row.pivotal = pivotal.evaluate(p);
    row.primal_bound = 2 * std::max(from_origin.evaluate(p), from_head.evaluate(p));
    // Edges with no dual partner (boundary-column verticals) are never pivotal.
    row.dual_bound = 0;
    for (const auto& arm : dual_arms) row.dual_bound = std::max(row.dual_bound, Rational(2 * arm.evaluate(p)));
    row.primal_ok = row.pivotal <= row.primal_bound;
    row.dual_ok = row.pivotal <= row.dual_bound;
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::vector<Rational> rational_grid(int first, int last, int denominator) {
  std::vector<Rational> out;
  for (int i = first; i <= last; ++i) out.emplace_back(i, denominator);
  return out;
}

}  // namespace percolab::oracle
