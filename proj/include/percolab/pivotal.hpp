#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "percolab/config.hpp"
#include "percolab/connectivity.hpp"
#include "percolab/lattice.hpp"

namespace percolab {

struct PivotalWitness {
  std::size_t edge = 0;
  bool holds_plus = false;   // event on omega with `edge` open
  bool holds_minus = false;  // event on omega with `edge` closed

  bool pivotal() const { return holds_plus != holds_minus; }
};

/// Definitional pivotality: evaluates the event with `e` forced open and closed.
/// `e` indexes omega's rectangle; edges outside the event's support are never pivotal.
PivotalWitness is_pivotal(const EventId& event, const Configuration& omega, std::size_t e);

/// Pivotal edges of the horizontal crossing of omega.rect(), computed from a
/// single labeling of the side-connected primal clusters (when the crossing is
/// absent) or the top/bottom-connected dual clusters (when it is present).
class PivotalFinder {
 public:
  explicit PivotalFinder(const Rect& rect) : rect_(rect), dual_(rect) {}

  const Rect& rect() const { return rect_; }
  const DualGraph& dual() const { return dual_; }

  /// Sorted edge indices; requires omega.rect() == rect().
  std::vector<std::size_t> find(const Configuration& omega) const;

 private:
  Rect rect_;
  DualGraph dual_;
};

/// Pivotal set for H(rect); omega must live on exactly `rect`.
std::vector<std::size_t> pivotal_set(const Rect& rect, const Configuration& omega);

/// Same set computed by double evaluation of every edge.
std::vector<std::size_t> pivotal_set_by_definition(const Rect& rect, const Configuration& omega);

/// Necessary consequences of `e` being pivotal for H(rect) in omega.
struct PivotalStructure {
  std::size_t edge = 0;
  /// With e removed, one endpoint reaches the left side and the other the right.
  bool primal_arms = false;
  /// Without e*, the dual endpoints reach the top and bottom dual rows.
  bool dual_arms = false;
  /// max over endpoints of cluster_edge_count(endpoint, excluding e).
  std::size_t longest_arm_edges = 0;
  /// ceil((k-1)/2).
  std::size_t arm_bound = 0;
  /// Dual edges in the component of e* once e is closed.
  std::size_t dual_component_edges = 0;
  /// l + 1.
  std::size_t dual_bound = 0;

  bool arm_length_ok() const { return longest_arm_edges >= arm_bound; }
  bool dual_size_ok() const { return dual_component_edges >= dual_bound; }
  bool ok() const { return primal_arms && dual_arms && arm_length_ok() && dual_size_ok(); }
  std::string describe() const;
};

/// Throws std::invalid_argument when `e` is not pivotal for H(rect) in omega.
PivotalStructure check_pivotal_structure(const Rect& rect, const Configuration& omega, std::size_t e);

}  // namespace percolab
