#include "percolab/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

#include "percolab/pivotal.hpp"

namespace percolab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void require_samples(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("sample count must be at least 1");
}

}  // namespace

double z_for_confidence(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0))
    throw std::invalid_argument("confidence level must lie in (0, 1)");
  const boost::math::normal_distribution<double> normal;
  return boost::math::quantile(normal, 0.5 + confidence / 2.0);
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double phat = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (phat + z2 / (2.0 * nn)) / denom;
  const double half = z / denom * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn));
  Interval out{std::max(0.0, center - half), std::min(1.0, center + half)};
  out.low = std::min(out.low, phat);
  out.high = std::max(out.high, phat);
  return out;
}

Estimate make_estimate(std::uint64_t successes, std::uint64_t n, double confidence,
                       const RngSpec& rng) {
  Estimate e;
  e.successes = successes;
  e.n = n;
  e.confidence = confidence;
  e.rng = rng;
  e.p_hat = n == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(n);
  const auto ci = wilson_interval(successes, n, z_for_confidence(confidence));
  e.ci_low = ci.low;
  e.ci_high = ci.high;
  return e;
}

Estimate estimate_event(const EventId& event, double p, const RunOptions& options) {
  check_probability(p);
  require_samples(options.samples);
  const auto start = Clock::now();
  const Rect rect = support(event);
  std::vector<std::uint64_t> hits(std::max(1u, options.workers), 0);
  for_each_range(options.samples, options.workers,
                 [&](std::uint64_t begin, std::uint64_t end, unsigned worker) {
                   Configuration omega(rect);
                   DisjointSets scratch;
                   std::uint64_t local = 0;
                   for (std::uint64_t s = begin; s < end; ++s) {
                     sample_into(omega, p, SampleStream(options.rng.seed, s));
                     local += evaluate(event, omega, scratch) ? 1 : 0;
                   }
                   hits[worker] = local;
                 });
  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  Estimate e = make_estimate(total, options.samples, options.confidence, options.rng);
  e.wall_seconds = seconds_since(start);
  return e;
}

Sweeper::Sweeper(const Rect& rect)
    : rect_(rect),
      keys_(rect.edge_count()),
      bucket_start_(rect.edge_count() + 1),
      cursor_(rect.edge_count()),
      order_(rect.edge_count()),
      ends_a_(rect.edge_count()),
      ends_b_(rect.edge_count()) {
  for (std::size_t i = 0; i < rect.edge_count(); ++i) {
    const Edge e = rect.edge_at(i);
    ends_a_[i] = rect.vertex_index(e.origin);
    ends_b_[i] = rect.vertex_index(e.head());
  }
}

ThresholdSample Sweeper::run(const SampleStream& stream) {
  // Counting sort of the 53-bit labels into E equal-width buckets; the sweep
  // sorts each bucket lazily and stops at the first crossing.
  const std::size_t count = keys_.size();
  std::fill(bucket_start_.begin(), bucket_start_.end(), 0);
  auto bucket_of = [count](std::uint64_t key) {
    return static_cast<std::size_t>((static_cast<unsigned __int128>(key) * count) >> 53);
  };
  for (std::size_t i = 0; i < count; ++i) {
    keys_[i] = stream.bits(i) >> 11;
    ++bucket_start_[bucket_of(keys_[i]) + 1];
  }
  for (std::size_t b = 1; b <= count; ++b) bucket_start_[b] += bucket_start_[b - 1];
  std::copy(bucket_start_.begin(), bucket_start_.end() - 1, cursor_.begin());
  for (std::size_t i = 0; i < count; ++i)
    order_[cursor_[bucket_of(keys_[i])]++] = static_cast<std::uint32_t>(i);

  const std::size_t left = rect_.vertex_count();
  const std::size_t right = left + 1;
  sets_.reset(left + 2);
  for (int y = rect_.y0(); y <= rect_.y1(); ++y) {
    sets_.unite(rect_.vertex_index({rect_.x0(), y}), left);
    sets_.unite(rect_.vertex_index({rect_.x1(), y}), right);
  }
  auto by_label = [this](std::uint32_t a, std::uint32_t b) {
    return keys_[a] != keys_[b] ? keys_[a] < keys_[b] : a < b;
  };
  for (std::size_t b = 0; b < count; ++b) {
    const auto first = order_.begin() + bucket_start_[b];
    const auto last = order_.begin() + bucket_start_[b + 1];
    if (last - first > 1) std::sort(first, last, by_label);
    for (auto it = first; it != last; ++it) {
      const std::uint32_t e = *it;
      if (sets_.unite(ends_a_[e], ends_b_[e]) && sets_.same(left, right))
        return {static_cast<double>(keys_[e]) * 0x1.0p-53, e};
    }
  }
  return {};  // unreachable: the all-open configuration crosses
}

ThresholdSample sweep_threshold(const Rect& rect, const RngSpec& rng, std::uint64_t sample_index) {
  Sweeper sweeper(rect);
  return sweeper.run(SampleStream(rng.seed, sample_index));
}

std::vector<double> sweep_taus(const Rect& rect, const RngSpec& rng, std::uint64_t first,
                               std::uint64_t count, unsigned workers) {
  std::vector<double> taus(count);
  for_each_range(count, workers, [&](std::uint64_t begin, std::uint64_t end, unsigned) {
    Sweeper sweeper(rect);
    for (std::uint64_t s = begin; s < end; ++s)
      taus[s] = sweeper.run(SampleStream(rng.seed, first + s)).tau;
  });
  return taus;
}

Curve curve_from_taus(const Rect& rect, std::span<const double> sorted_taus,
                      std::span<const double> grid, double confidence, const RngSpec& rng) {
  Curve curve{rect, {grid.begin(), grid.end()}, {}};
  for (double p : grid) {
    const auto below = static_cast<std::uint64_t>(
        std::lower_bound(sorted_taus.begin(), sorted_taus.end(), p) - sorted_taus.begin());
    curve.points.push_back(make_estimate(below, sorted_taus.size(), confidence, rng));
  }
  return curve;
}

Curve estimate_curve(const Rect& rect, std::span<const double> grid, const RunOptions& options) {
  require_samples(options.samples);
  for (double p : grid) check_probability(p);
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw std::invalid_argument("probability grid must be sorted");
  const auto start = Clock::now();
  auto taus = sweep_taus(rect, options.rng, 0, options.samples, options.workers);
  std::sort(taus.begin(), taus.end());
  Curve curve = curve_from_taus(rect, taus, grid, options.confidence, options.rng);
  const double elapsed = seconds_since(start);
  for (auto& point : curve.points) point.wall_seconds = elapsed;
  return curve;
}

MaxPivotalEstimate estimate_max_pivotal(const Rect& rect, double p, const RunOptions& options) {
  check_probability(p);
  require_samples(options.samples);
  const auto start = Clock::now();
  const std::size_t edges = rect.edge_count();
  std::vector<std::vector<std::uint64_t>> partial(std::max(1u, options.workers));
  for_each_range(options.samples, options.workers,
                 [&](std::uint64_t begin, std::uint64_t end, unsigned worker) {
                   const PivotalFinder finder(rect);
                   Configuration omega(rect);
                   std::vector<std::uint64_t> counts(edges, 0);
                   for (std::uint64_t s = begin; s < end; ++s) {
                     sample_into(omega, p, SampleStream(options.rng.seed, s));
                     for (std::size_t e : finder.find(omega)) ++counts[e];
                   }
                   partial[worker] = std::move(counts);
                 });

  MaxPivotalEstimate out;
  out.per_edge.assign(edges, 0);
  for (const auto& counts : partial)
    for (std::size_t e = 0; e < counts.size(); ++e) out.per_edge[e] += counts[e];
  out.edge = static_cast<std::size_t>(
      std::max_element(out.per_edge.begin(), out.per_edge.end()) - out.per_edge.begin());

  const double adjusted = 1.0 - (1.0 - options.confidence) / static_cast<double>(edges);
  out.max = make_estimate(out.per_edge[out.edge], options.samples, adjusted, options.rng);
  out.max.wall_seconds = seconds_since(start);
  return out;
}

}  // namespace percolab
