#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "percolab/lattice.hpp"

namespace percolab {

inline constexpr std::string_view kRngAlgorithm = "splitmix64-keyed-v1";

struct RngSpec {
  std::uint64_t seed = 0;
  std::string algorithm = std::string(kRngAlgorithm);
};

/// SplitMix64 output function.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based stream for one sample: the draw for edge i depends only on
/// (seed, sample index, i), so any worker can regenerate any edge on demand.
class SampleStream {
 public:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  SampleStream(std::uint64_t seed, std::uint64_t sample_index) noexcept
      : key_(mix64(seed ^ mix64(sample_index + kGamma))) {}

  std::uint64_t bits(std::uint64_t edge) const noexcept { return mix64(key_ + (edge + 1) * kGamma); }

  /// Uniform in [0, 1) with a 53-bit mantissa.
  double uniform(std::uint64_t edge) const noexcept {
    return static_cast<double>(bits(edge) >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
};

enum class EdgeState : std::uint8_t { closed, open };

/// Open/closed state of every edge of a rectangle, bit i set iff edge i is open.
class Configuration {
 public:
  explicit Configuration(const Rect& rect);

  static Configuration all_closed(const Rect& rect) { return Configuration(rect); }
  static Configuration all_open(const Rect& rect);
  /// Requires edge_count() <= 64.
  static Configuration from_mask(const Rect& rect, std::uint64_t mask);

  const Rect& rect() const { return rect_; }
  std::size_t size() const { return size_; }

  bool is_open(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1ULL; }
  /// Throws std::out_of_range when the edge is not in rect().
  bool is_open(const Edge& e) const;
  void set(std::size_t i, bool open) {
    const std::uint64_t bit = 1ULL << (i & 63);
    if (open)
      words_[i >> 6] |= bit;
    else
      words_[i >> 6] &= ~bit;
  }
  /// Requires edge_count() <= 64.
  void assign_mask(std::uint64_t mask);

  std::size_t open_count() const;
  std::size_t closed_count() const { return size_ - open_count(); }
  std::span<const std::uint64_t> words() const { return words_; }

  bool operator==(const Configuration&) const = default;

 private:
  Rect rect_;
  std::size_t size_;
  std::vector<std::uint64_t> words_;
};

/// Copy of `omega` with edge `e` forced to `to`; throws std::out_of_range.
Configuration flip(const Configuration& omega, std::size_t e, EdgeState to);

/// Per-edge uniforms; thresholding at p couples all Pr_p monotonically.
class UniformLabels {
 public:
  UniformLabels(const Rect& rect, std::vector<double> labels);

  const Rect& rect() const { return rect_; }
  std::span<const double> labels() const { return labels_; }
  double operator[](std::size_t i) const { return labels_[i]; }

  /// Edge i is open iff label < p.
  Configuration threshold(double p) const;

 private:
  Rect rect_;
  std::vector<double> labels_;
};

UniformLabels sample_labels(const Rect& rect, const RngSpec& rng, std::uint64_t sample_index);

/// I.i.d. Bernoulli(p) configuration; equal to sample_labels(...).threshold(p).
/// Throws std::invalid_argument for p outside [0, 1].
Configuration sample(const Rect& rect, double p, const RngSpec& rng, std::uint64_t sample_index);

/// Allocation-free variant for hot loops; `out` keeps its rectangle.
void sample_into(Configuration& out, double p, const SampleStream& stream);

void check_probability(double p);

/// "PERC1 k l E\n" followed by E '0'/'1' characters in canonical edge order.
std::string dump(const Configuration& omega);
Configuration parse_dump(std::string_view text, int x0 = 0, int y0 = 0);

}  // namespace percolab
