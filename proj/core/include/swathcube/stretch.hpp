#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace swathcube {

/// none: linear over the full value range. common: one 2%/98% pair pooled
/// over all displayed channels. per_channel: an independent pair each.
enum class StretchMode { none, common, per_channel };

std::string_view to_string(StretchMode mode);
std::optional<StretchMode> parse_stretch_mode(std::string_view text);

struct StretchBounds {
  StretchMode mode = StretchMode::per_channel;
  std::vector<float> low;   // one per channel
  std::vector<float> high;  // one per channel, >= low
};

inline constexpr double kStretchLowPercent = 2.0;
inline constexpr double kStretchHighPercent = 98.0;

/// Fixed 1024-bin histogram over [low, high]. The last bin is closed.
class Histogram {
 public:
  static constexpr std::size_t kBins = 1024;

  Histogram() = default;
  Histogram(double low, double high);

  /// Range taken from the finite values themselves.
  static Histogram of(std::span<const float> values);

  void add(float value);
  void merge(const Histogram& other);

  double low() const noexcept { return low_; }
  double high() const noexcept { return high_; }
  std::uint64_t total() const noexcept { return total_; }
  bool empty() const noexcept { return total_ == 0; }
  const std::array<std::uint64_t, kBins>& counts() const noexcept { return counts_; }

  std::size_t bin_of(double value) const;
  double bin_center(std::size_t bin) const;

  /// Nearest-rank percentile reported as the center of the bin holding that
  /// rank. A zero-width range returns its single value.
  double percentile(double p) const;

 private:
  double low_ = 0;
  double high_ = 0;
  std::uint64_t total_ = 0;
  std::array<std::uint64_t, kBins> counts_{};
};

/// Rank ceil(p * n / 100), at least 1.
std::size_t nearest_rank(double p, std::size_t n);

/// Exact nearest-rank percentile; NaN values are ignored. Throws on an
/// empty (or all-NaN) input.
double exact_percentile(std::span<const float> values, double p);

/// Bounds from per-channel values of covered pixels. `exact` selects full
/// sorting instead of the screen-content histogram. Channels without values
/// get low = high = 0.
StretchBounds stretch_bounds(std::span<const std::span<const float>> channels, StretchMode mode,
                             bool exact = false);

/// Maps value to [0, 1]; low == high maps everything to 0.5.
float stretch_unit(float value, float low, float high);
std::uint8_t stretch_byte(float value, float low, float high);

}  // namespace swathcube
