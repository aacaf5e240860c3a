#include "percolab/threshold.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace percolab {

Rect aspect_rect(int aspect, int n) { return Rect(aspect * n, n); }

namespace {

using Clock = std::chrono::steady_clock;

class TauPool {
 public:
  TauPool(const Rect& rect, const RngSpec& rng, unsigned workers, std::uint64_t initial)
      : rect_(rect), rng_(rng), workers_(workers) {
    grow_to(initial);
  }

  std::uint64_t size() const { return sorted_.size(); }

  void grow_to(std::uint64_t target) {
    if (target <= sorted_.size()) return;
    auto extra = sweep_taus(rect_, rng_, sorted_.size(), target - sorted_.size(), workers_);
    std::sort(extra.begin(), extra.end());
    const auto middle = static_cast<std::ptrdiff_t>(sorted_.size());
    sorted_.insert(sorted_.end(), extra.begin(), extra.end());
    std::inplace_merge(sorted_.begin(), sorted_.begin() + middle, sorted_.end());
  }

  std::uint64_t below(double p) const {
    return static_cast<std::uint64_t>(std::lower_bound(sorted_.begin(), sorted_.end(), p) -
                                      sorted_.begin());
  }

  /// Smallest tau at which the empirical curve reaches `target`.
  double quantile(double target) const {
    const auto n = static_cast<double>(sorted_.size());
    auto m = static_cast<std::size_t>(std::ceil(target * n));
    m = std::clamp<std::size_t>(m, 1, sorted_.size());
    return sorted_[m - 1];
  }

 private:
  Rect rect_;
  RngSpec rng_;
  unsigned workers_;
  std::vector<double> sorted_;
};

WindowEndpoint locate(TauPool& pool, double target, const WindowBudget& budget, double z) {
  WindowEndpoint out;
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > budget.resolution && out.resolved) {
    const double mid = 0.5 * (lo + hi);
    for (;;) {
      const auto ci = wilson_interval(pool.below(mid), pool.size(), z);
      if (ci.high < target) {
        lo = mid;
        break;
      }
      if (ci.low > target) {
        hi = mid;
        break;
      }
      if (pool.size() >= budget.max_sweeps) {
        out.resolved = false;
        break;
      }
      pool.grow_to(std::min(budget.max_sweeps, 2 * pool.size()));
    }
  }
  out.bracket_low = lo;
  out.bracket_high = hi;
  out.p = std::clamp(pool.quantile(target), lo, hi);
  return out;
}

// Breadth-first search of the open cluster of the origin restricted to
// box(origin, radius), drawing edge states on demand from the keyed stream.
class ArmProbe {
 public:
  explicit ArmProbe(int max_radius)
      : box_(box({0, 0}, std::max(1, max_radius))), stamp_(box_.vertex_count(), 0) {}

  bool reaches(const SampleStream& stream, double scaled_p, int radius) {
    if (radius <= 0) return true;
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
    queue_.clear();
    queue_.push_back({0, 0});
    stamp_[box_.vertex_index({0, 0})] = epoch_;
    auto open = [&](std::size_t edge) {
      return static_cast<double>(stream.bits(edge) >> 11) < scaled_p;
    };
    auto push = [&](Vertex w) {
      auto& s = stamp_[box_.vertex_index(w)];
      if (s == epoch_) return;
      s = epoch_;
      queue_.push_back(w);
    };
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const Vertex v = queue_[head];
      if (std::max(std::abs(v.x), std::abs(v.y)) >= radius) return true;
      // |x|, |y| < radius here, so all four neighbours lie in box(origin, radius).
      if (open(box_.horizontal_index(v.x, v.y))) push({v.x + 1, v.y});
      if (open(box_.horizontal_index(v.x - 1, v.y))) push({v.x - 1, v.y});
      if (open(box_.vertical_index(v.x, v.y))) push({v.x, v.y + 1});
      if (open(box_.vertical_index(v.x, v.y - 1))) push({v.x, v.y - 1});
    }
    return false;
  }

 private:
  Rect box_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<Vertex> queue_;
};

bool pair_nondecreasing(const Estimate& before, const Estimate& after) {
  return after.p_hat >= before.p_hat || after.ci_high >= before.ci_low;
}

}  // namespace

WindowReport measure_window(const Rect& rect, double epsilon, const RngSpec& rng,
                            const WindowBudget& budget) {
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw std::invalid_argument("window epsilon must lie in (0, 1/2)");
  if (budget.initial_sweeps == 0 || budget.max_sweeps < budget.initial_sweeps)
    throw std::invalid_argument("window budget needs 0 < initial_sweeps <= max_sweeps");

  const double z = z_for_confidence(budget.confidence);
  TauPool pool(rect, rng, budget.workers, budget.initial_sweeps);

  WindowReport report;
  report.rect = rect;
  report.epsilon = epsilon;
  report.rng = rng;
  report.low = locate(pool, epsilon, budget, z);
  report.high = locate(pool, 1.0 - epsilon, budget, z);
  report.width = std::max(0.0, report.high.p - report.low.p);
  report.sweeps = pool.size();

  RunOptions pivotal_options;
  pivotal_options.samples = std::max<std::uint64_t>(1, budget.pivotal_samples);
  pivotal_options.rng = rng;
  pivotal_options.workers = budget.workers;
  pivotal_options.confidence = budget.confidence;
  report.max_pivotal = estimate_max_pivotal(rect, budget.pivotal_p, pivotal_options);
  return report;
}

RswReport rsw_floor_check(std::span<const int> sizes, double p, const RunOptions& options,
                          double floor, int aspect, double max_step) {
  RswReport report;
  report.floor = floor;
  report.max_step = max_step;
  report.floor_ok = true;
  report.stable_ok = true;
  for (int n : sizes) {
    const Rect rect = aspect_rect(aspect, n);
    SizedEstimate row{rect, estimate_event(HorizontalCrossing{rect}, p, options)};
    report.floor_ok = report.floor_ok && row.estimate.ci_low > floor;
    if (!report.rows.empty())
      report.stable_ok = report.stable_ok &&
                         std::abs(row.estimate.p_hat - report.rows.back().estimate.p_hat) < max_step;
    report.rows.push_back(std::move(row));
  }
  return report;
}

ArmReport arm_decay(double p, std::span<const int> radii, const RunOptions& options) {
  check_probability(p);
  if (radii.empty()) throw std::invalid_argument("arm decay needs at least one radius");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] < 0 || (i > 0 && radii[i] <= radii[i - 1]))
      throw std::invalid_argument("radii must be nonnegative and strictly increasing");
  }
  if (options.samples == 0) throw std::invalid_argument("sample count must be at least 1");

  const auto start = Clock::now();
  const std::size_t count = radii.size();
  const double scaled = p * 0x1.0p53;
  const unsigned workers = std::max(1u, options.workers);
  std::vector<std::vector<std::uint64_t>> hits(workers, std::vector<std::uint64_t>(count, 0));
  std::vector<std::uint64_t> violations(workers, 0);

  for_each_range(options.samples, workers,
                 [&](std::uint64_t begin, std::uint64_t end, unsigned worker) {
                   ArmProbe probe(radii.back());
                   std::vector<char> holds(count);
                   for (std::uint64_t s = begin; s < end; ++s) {
                     const SampleStream stream(options.rng.seed, s);
                     for (std::size_t i = 0; i < count; ++i) {
                       holds[i] = probe.reaches(stream, scaled, radii[i]);
                       hits[worker][i] += holds[i] ? 1 : 0;
                       if (i > 0 && holds[i] && !holds[i - 1]) ++violations[worker];
                     }
                   }
                 });

  ArmReport report;
  report.p = p;
  const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t total = 0;
    for (const auto& h : hits) total += h[i];
    ArmRow row{radii[i], make_estimate(total, options.samples, options.confidence, options.rng)};
    row.estimate.wall_seconds = elapsed;
    report.rows.push_back(row);
  }
  for (auto v : violations) report.nesting_violations += v;
  report.strictly_decreasing = true;
  for (std::size_t i = 1; i < count; ++i)
    report.strictly_decreasing = report.strictly_decreasing &&
                                 report.rows[i].estimate.ci_high < report.rows[i - 1].estimate.ci_low;
  return report;
}

Lemma2Report lemma2_check(double p, std::span<const int> sizes, double target,
                          const RunOptions& options, int aspect) {
  check_probability(p);
  if (!(p > 0.5)) throw std::invalid_argument("lemma2 check needs p > 1/2");
  if (options.samples == 0) throw std::invalid_argument("sample count must be at least 1");
  Lemma2Report report;
  report.p = p;
  report.target = target;
  report.nondecreasing = true;
  for (int n : sizes) {
    const Rect rect = aspect_rect(aspect, n);
    const double grid[] = {p};
    const Curve curve = estimate_curve(rect, grid, options);
    SizedEstimate row{rect, curve.points.front()};
    if (!report.rows.empty())
      report.nondecreasing =
          report.nondecreasing && pair_nondecreasing(report.rows.back().estimate, row.estimate);
    report.rows.push_back(std::move(row));
  }
  report.target_ok = !report.rows.empty() && report.rows.back().estimate.ci_low > target;
  return report;
}

}  // namespace percolab
