#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "percolab/lattice.hpp"
#include "percolab/montecarlo.hpp"

namespace percolab {

inline constexpr int kDefaultAspect = 3;

/// The (aspect*n)-by-n rectangle at the origin.
Rect aspect_rect(int aspect, int n);

struct WindowBudget {
  std::uint64_t initial_sweeps = 2000;
  std::uint64_t max_sweeps = 64000;
  double resolution = 1e-3;
  std::uint64_t pivotal_samples = 2000;
  double pivotal_p = 0.5;
  unsigned workers = 1;
  double confidence = kDefaultConfidence;
};

/// Level p at which Pr_p(H) crosses a target, located by bisection.
struct WindowEndpoint {
  double p = 0.0;
  /// Final bracket [low, high] around p.
  double bracket_low = 0.0;
  double bracket_high = 1.0;
  /// False when some bisection step could not separate the estimate from the
  /// target even at max_sweeps; the bracket then reflects sampling noise.
  bool resolved = true;
};

struct WindowReport {
  Rect rect{1, 1};
  double epsilon = 0.0;
  WindowEndpoint low;
  WindowEndpoint high;
  double width = 0.0;
  std::uint64_t sweeps = 0;
  MaxPivotalEstimate max_pivotal;
  RngSpec rng;

  double p_low() const { return low.p; }
  double p_high() const { return high.p; }
  bool resolved() const { return low.resolved && high.resolved; }
};

/// Measures the p-interval over which Pr_p(H(rect)) climbs from eps to 1 - eps,
/// plus the largest pivotal probability at budget.pivotal_p. Requires 0 < eps < 1/2.
WindowReport measure_window(const Rect& rect, double epsilon, const RngSpec& rng,
                            const WindowBudget& budget);

struct SizedEstimate {
  Rect rect;
  Estimate estimate;
};

struct RswReport {
  double floor = 0.01;
  double max_step = 0.05;
  std::vector<SizedEstimate> rows;
  bool floor_ok = false;   // every ci_low exceeds the floor
  bool stable_ok = false;  // successive estimates differ by less than max_step
};

RswReport rsw_floor_check(std::span<const int> sizes, double p, const RunOptions& options,
                          double floor = 0.01, int aspect = kDefaultAspect,
                          double max_step = 0.05);

struct ArmRow {
  int radius = 0;
  Estimate estimate;
};

struct ArmReport {
  double p = 0.5;
  std::vector<ArmRow> rows;
  /// Samples where the arm to some radius held but the arm to a smaller one did not.
  std::uint64_t nesting_violations = 0;
  /// Every successive pair has disjoint intervals with the larger radius below.
  bool strictly_decreasing = false;
};

/// Arm events about the origin at each radius, evaluated on one shared
/// configuration per sample over the box of the largest radius.
ArmReport arm_decay(double p, std::span<const int> radii, const RunOptions& options);

struct Lemma2Report {
  double p = 0.6;
  double target = 0.99;
  std::vector<SizedEstimate> rows;
  /// No successive pair decreases by more than the interval overlap allows.
  bool nondecreasing = false;
  /// The last row's lower confidence bound exceeds the target.
  bool target_ok = false;
};

/// Pr_p(H(aspect*n by n)) from coupled sweeps for each n. Requires p > 1/2.
Lemma2Report lemma2_check(double p, std::span<const int> sizes, double target,
                          const RunOptions& options, int aspect = kDefaultAspect);

}  // namespace percolab
