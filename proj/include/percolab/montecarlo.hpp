#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "percolab/config.hpp"
#include "percolab/connectivity.hpp"
#include "percolab/lattice.hpp"

namespace percolab {

inline constexpr double kDefaultConfidence = 0.95;

/// Two-sided standard normal quantile for the given coverage, e.g. 0.95 -> 1.959964.
double z_for_confidence(double confidence);

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

/// Wilson score interval for `successes` out of `n` trials.
Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z);

struct Estimate {
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  std::uint64_t successes = 0;
  std::uint64_t n = 0;
  double confidence = kDefaultConfidence;
  RngSpec rng;
  double wall_seconds = 0.0;
};

Estimate make_estimate(std::uint64_t successes, std::uint64_t n, double confidence,
                       const RngSpec& rng);

struct RunOptions {
  std::uint64_t samples = 10000;
  RngSpec rng;
  unsigned workers = 1;
  double confidence = kDefaultConfidence;
};

/// Splits [0, count) into `workers` contiguous ranges and runs fn(begin, end, worker)
/// on each, one thread per range. The first exception thrown is rethrown.
template <class Fn>
void for_each_range(std::uint64_t count, unsigned workers, Fn&& fn) {
  workers = std::max(1u, workers);
  if (workers == 1 || count < 2) {
    fn(std::uint64_t{0}, count, 0u);
    return;
  }
  std::vector<std::thread> threads;
  std::exception_ptr failure;
  std::mutex guard;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = count * w / workers;
    const std::uint64_t end = count * (w + 1) / workers;
    threads.emplace_back([&, begin, end, w] {
      try {
        fn(begin, end, w);
      } catch (...) {
        std::lock_guard lock(guard);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Frequency of `event` over samples 0..n-1 of Pr_p on support(event).
Estimate estimate_event(const EventId& event, double p, const RunOptions& options);

struct ThresholdSample {
  double tau = 1.0;          // crossing at level p iff tau < p
  std::size_t edge = npos;   // edge whose insertion completed the first crossing
};

/// Inserts edges of `rect` in increasing label order into a union-find with
/// virtual left/right nodes until the sides meet. Reusable across samples.
class Sweeper {
 public:
  explicit Sweeper(const Rect& rect);

  ThresholdSample run(const SampleStream& stream);

 private:
  Rect rect_;
  std::vector<std::uint64_t> keys_;
  std::vector<std::uint32_t> bucket_start_;
  std::vector<std::uint32_t> cursor_;
  std::vector<std::uint32_t> order_;
  std::vector<std::size_t> ends_a_;
  std::vector<std::size_t> ends_b_;
  DisjointSets sets_;
};

ThresholdSample sweep_threshold(const Rect& rect, const RngSpec& rng, std::uint64_t sample_index);

/// tau for samples first..first+count-1, in sample order.
std::vector<double> sweep_taus(const Rect& rect, const RngSpec& rng, std::uint64_t first,
                               std::uint64_t count, unsigned workers);

struct Curve {
  Rect rect;
  std::vector<double> grid;
  std::vector<Estimate> points;
};

/// Empirical distribution function of the sorted taus at each grid point.
Curve curve_from_taus(const Rect& rect, std::span<const double> sorted_taus,
                      std::span<const double> grid, double confidence, const RngSpec& rng);

/// One sweep per sample; the grid must be sorted.
Curve estimate_curve(const Rect& rect, std::span<const double> grid, const RunOptions& options);

struct MaxPivotalEstimate {
  /// Frequency of the most frequently pivotal edge. Its interval is a Wilson
  /// interval at confidence 1 - (1 - c)/E (union bound over edges).
  Estimate max;
  std::size_t edge = 0;
  std::vector<std::uint64_t> per_edge;
};

MaxPivotalEstimate estimate_max_pivotal(const Rect& rect, double p, const RunOptions& options);

}  // namespace percolab
