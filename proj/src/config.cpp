#include "percolab/config.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace percolab {

Configuration::Configuration(const Rect& rect)
    : rect_(rect), size_(rect.edge_count()), words_((rect.edge_count() + 63) / 64, 0) {}

Configuration Configuration::all_open(const Rect& rect) {
  Configuration c(rect);
  for (std::size_t i = 0; i < c.size_; ++i) c.set(i, true);
  return c;
}

Configuration Configuration::from_mask(const Rect& rect, std::uint64_t mask) {
  Configuration c(rect);
  c.assign_mask(mask);
  return c;
}

void Configuration::assign_mask(std::uint64_t mask) {
  if (size_ > 64) throw std::length_error("assign_mask needs at most 64 edges");
  if (size_ < 64) mask &= (1ULL << size_) - 1;
  words_[0] = mask;
}

bool Configuration::is_open(const Edge& e) const {
  const auto index = rect_.index_of(e);
  if (!index) throw std::out_of_range("edge outside configuration rectangle");
  return is_open(*index);
}

std::size_t Configuration::open_count() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

Configuration flip(const Configuration& omega, std::size_t e, EdgeState to) {
  if (e >= omega.size()) {
    throw std::out_of_range("edge index " + std::to_string(e) + " outside [0, " +
                            std::to_string(omega.size()) + ")");
  }
  Configuration out = omega;
  out.set(e, to == EdgeState::open);
  return out;
}

UniformLabels::UniformLabels(const Rect& rect, std::vector<double> labels)
    : rect_(rect), labels_(std::move(labels)) {
  if (labels_.size() != rect_.edge_count())
    throw std::invalid_argument("label count does not match edge count");
}

Configuration UniformLabels::threshold(double p) const {
  Configuration c(rect_);
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] < p) c.set(i, true);
  return c;
}

UniformLabels sample_labels(const Rect& rect, const RngSpec& rng, std::uint64_t sample_index) {
  const SampleStream stream(rng.seed, sample_index);
  std::vector<double> labels(rect.edge_count());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = stream.uniform(i);
  return UniformLabels(rect, std::move(labels));
}

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("probability must lie in [0, 1], got " + std::to_string(p));
}

Configuration sample(const Rect& rect, double p, const RngSpec& rng, std::uint64_t sample_index) {
  check_probability(p);
  Configuration c(rect);
  sample_into(c, p, SampleStream(rng.seed, sample_index));
  return c;
}

void sample_into(Configuration& out, double p, const SampleStream& stream) {
  // label < p  <=>  (bits >> 11) < p * 2^53, exactly, since both sides are
  // representable and the scaling by a power of two is exact.
  const double scaled = p * 0x1.0p53;
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i)
    out.set(i, static_cast<double>(stream.bits(i) >> 11) < scaled);
}

std::string dump(const Configuration& omega) {
  const Rect& r = omega.rect();
  std::string out = "PERC1 " + std::to_string(r.k()) + " " + std::to_string(r.l()) + " " +
                    std::to_string(omega.size()) + "\n";
  out.reserve(out.size() + omega.size() + 1);
  for (std::size_t i = 0; i < omega.size(); ++i) out += omega.is_open(i) ? '1' : '0';
  out += '\n';
  return out;
}

Configuration parse_dump(std::string_view text, int x0, int y0) {
  std::istringstream in{std::string(text)};
  std::string magic;
  int k = 0;
  int l = 0;
  std::size_t e = 0;
  std::string bits;
  if (!(in >> magic >> k >> l >> e) || magic != "PERC1")
    throw std::invalid_argument("configuration dump must start with 'PERC1 k l E'");
  in >> bits;
  Configuration c(Rect(x0, y0, k, l));
  if (e != c.size() || bits.size() != e)
    throw std::invalid_argument("configuration dump length does not match k and l");
  for (std::size_t i = 0; i < e; ++i) {
    if (bits[i] != '0' && bits[i] != '1')
      throw std::invalid_argument("configuration dump holds a character other than 0/1");
    c.set(i, bits[i] == '1');
  }
  return c;
}

}  // namespace percolab
