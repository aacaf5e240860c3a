#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "percolab/connectivity.hpp"
#include "percolab/lattice.hpp"

namespace percolab::oracle {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr std::size_t kEventEdgeCap = 24;
inline constexpr std::size_t kIdentityEdgeCap = 20;

/// Thrown when exhaustive enumeration would exceed the edge cap.
class EnumerationTooLarge : public std::length_error {
 public:
  EnumerationTooLarge(std::size_t edges, std::size_t cap);
  std::size_t edges() const { return edges_; }
  std::size_t cap() const { return cap_; }

 private:
  std::size_t edges_;
  std::size_t cap_;
};

/// Pr_p(A) = sum_j counts[j] p^j (1-p)^(E-j), where counts[j] is the number
/// of configurations of `rect` with j open edges in which A holds.
struct CrossingPolynomial {
  Rect rect;
  std::vector<std::uint64_t> counts;

  std::size_t edge_count() const { return counts.size() - 1; }
  double evaluate(double p) const;
  Rational evaluate(const Rational& p) const;
  CrossingPolynomial complement() const;
  /// Integer coefficients of Pr_p(A) in the monomial basis 1, p, p^2, ...
  std::vector<BigInt> monomial_coefficients() const;
};

BigInt binomial(std::size_t n, std::size_t k);

/// Exhaustive over the 2^E states of `rect`; the event must read only edges of `rect`.
CrossingPolynomial exact_probability(const EventId& event, const Rect& rect);

/// Counts for the pivotal event of `e` for H(rect); identically zero when e is outside rect.
CrossingPolynomial exact_pivotal_probability(const Rect& rect, const Edge& e);

struct RussoReport {
  bool passed = false;
  BigInt max_residual;
  std::vector<BigInt> derivative;    // d/dp Pr_p(H), monomial basis
  std::vector<BigInt> pivotal_sum;   // sum_e Pr_p(pivotal_e), monomial basis
};

/// Checks d/dp Pr_p(H(rect)) = sum_e Pr_p(e pivotal) as an integer polynomial identity.
RussoReport russo_derivative_check(const Rect& rect);

/// "There is a self-avoiding open path of at least `length` edges in `rect` starting at v."
CrossingPolynomial exact_path_event(const Rect& rect, Vertex v, std::size_t length);

/// Dual analogue: self-avoiding path of dual edges with closed primal partners,
/// starting at dual vertex `start` of DualGraph(rect). Counts are indexed by the
/// number of open primal edges, so evaluating at p gives the dual-lattice
/// probability at parameter 1-p.
CrossingPolynomial exact_dual_path_event(const Rect& rect, std::size_t start, std::size_t length);

struct InequalityRow {
  std::size_t edge = 0;
  Rational p;
  Rational pivotal;
  Rational primal_bound;  // 2 max_v Pr_p(path >= ceil((k-1)/2) from v)
  Rational dual_bound;    // 2 max_a Pr_{1-p}(dual path >= ceil(l/2) from a)
  bool primal_ok = false;
  bool dual_ok = false;
};

struct InequalityReport {
  std::size_t primal_length = 0;
  std::size_t dual_length = 0;
  std::vector<InequalityRow> rows;
  bool passed() const;
};

InequalityReport pivotal_inequality_check(const Rect& rect, std::size_t e,
                                          std::span<const Rational> grid);

/// {first/denominator, ..., last/denominator}.
std::vector<Rational> rational_grid(int first, int last, int denominator);

}  // namespace percolab::oracle
