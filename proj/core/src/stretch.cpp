#include "swathcube/stretch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "swathcube/error.hpp"

namespace swathcube {

std::string_view to_string(StretchMode mode) {
  switch (mode) {
    case StretchMode::none:
      return "none";
    case StretchMode::common:
      return "common";
    case StretchMode::per_channel:
      return "per-channel";
  }
  return "none";
}

std::optional<StretchMode> parse_stretch_mode(std::string_view text) {
  if (text == "none") return StretchMode::none;
  if (text == "common") return StretchMode::common;
  if (text == "per-channel" || text == "per_channel") return StretchMode::per_channel;
  return std::nullopt;
}

Histogram::Histogram(double low, double high) : low_(low), high_(high) {
  if (!(low <= high) || !std::isfinite(low) || !std::isfinite(high))
    throw Error("histogram range must be finite with low <= high");
}

Histogram Histogram::of(std::span<const float> values) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (float v : values) {
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, static_cast<double>(v));
    hi = std::max(hi, static_cast<double>(v));
  }
  if (lo > hi) return Histogram();
  Histogram h(lo, hi);
  for (float v : values) h.add(v);
  return h;
}

std::size_t Histogram::bin_of(double value) const {
  if (high_ <= low_) return 0;
  const double t = (value - low_) / (high_ - low_) * static_cast<double>(kBins);
  if (!(t > 0)) return 0;
  return std::min(kBins - 1, static_cast<std::size_t>(t));
}

double Histogram::bin_center(std::size_t bin) const {
  if (high_ <= low_) return low_;
  const double width = (high_ - low_) / static_cast<double>(kBins);
  return low_ + (static_cast<double>(bin) + 0.5) * width;
}

void Histogram::add(float value) {
  if (!std::isfinite(value) || value < low_ || value > high_) return;
  ++counts_[bin_of(value)];
  ++total_;
}

void Histogram::merge(const Histogram& other) {
  if (other.empty()) return;
  if (other.low_ != low_ || other.high_ != high_) throw Error("cannot merge histograms with different ranges");
  for (std::size_t i = 0; i < kBins; ++i) counts_[i] += other.counts_[i];
  total_ += other.total_;
}

std::size_t nearest_rank(double p, std::size_t n) {
  const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n) / 100.0));
  return std::clamp<std::size_t>(rank, 1, n);
}

double Histogram::percentile(double p) const {
  if (empty()) throw Error("percentile of an empty histogram");
  if (high_ <= low_) return low_;
  const std::size_t rank = nearest_rank(p, total_);
  std::uint64_t seen = 0;
  for (std::size_t i = 0; i < kBins; ++i) {
    seen += counts_[i];
    if (seen >= rank) return bin_center(i);
  }
  return bin_center(kBins - 1);
}

double exact_percentile(std::span<const float> values, double p) {
  std::vector<float> v;
  v.reserve(values.size());
  for (float x : values) {
    if (!std::isnan(x)) v.push_back(x);
  }
  if (v.empty()) throw Error("percentile of an empty value set");
  const std::size_t rank = nearest_rank(p, v.size());
  auto nth = v.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(v.begin(), nth, v.end());
  return *nth;
}

namespace {

std::pair<float, float> full_range(std::span<const float> values) {
  float lo = std::numeric_limits<float>::infinity();
  float hi = -lo;
  for (float v : values) {
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo > hi) return {0.0f, 0.0f};
  return {lo, hi};
}

std::pair<float, float> bounds_of(std::span<const float> values, bool exact) {
  if (values.empty()) return {0.0f, 0.0f};
  if (exact) {
    return {static_cast<float>(exact_percentile(values, kStretchLowPercent)),
            static_cast<float>(exact_percentile(values, kStretchHighPercent))};
  }
  const Histogram h = Histogram::of(values);
  if (h.empty()) return {0.0f, 0.0f};
  return {static_cast<float>(h.percentile(kStretchLowPercent)),
          static_cast<float>(h.percentile(kStretchHighPercent))};
}

}  // namespace

StretchBounds stretch_bounds(std::span<const std::span<const float>> channels, StretchMode mode,
                             bool exact) {
  StretchBounds out;
  out.mode = mode;
  out.low.resize(channels.size());
  out.high.resize(channels.size());
  if (mode == StretchMode::per_channel || mode == StretchMode::none) {
    for (std::size_t c = 0; c < channels.size(); ++c) {
      const auto [lo, hi] = mode == StretchMode::none ? full_range(channels[c]) : bounds_of(channels[c], exact);
      out.low[c] = lo;
      out.high[c] = hi;
    }
    return out;
  }
  std::vector<float> pooled;
  for (auto ch : channels) pooled.insert(pooled.end(), ch.begin(), ch.end());
  const auto [lo, hi] = bounds_of(pooled, exact);
  std::fill(out.low.begin(), out.low.end(), lo);
  std::fill(out.high.begin(), out.high.end(), hi);
  return out;
}

float stretch_unit(float value, float low, float high) {
  if (!(high > low)) return 0.5f;
  return std::clamp((value - low) / (high - low), 0.0f, 1.0f);
}

std::uint8_t stretch_byte(float value, float low, float high) {
  return static_cast<std::uint8_t>(std::lround(stretch_unit(value, low, high) * 255.0f));
}

}  // namespace swathcube
