#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include <swathcube/error.hpp>
#include <swathcube/stretch.hpp>

namespace {

using namespace swathcube;

double sort_percentile(std::vector<float> v, double p) {
  std::sort(v.begin(), v.end());
  const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(v.size()) / 100.0));
  return v[std::clamp<std::size_t>(rank, 1, v.size()) - 1];
}

TEST(Percentile, OneToHundred) {
  std::vector<float> v(100);
  std::iota(v.begin(), v.end(), 1.0f);
  std::shuffle(v.begin(), v.end(), std::mt19937_64(1));
  EXPECT_EQ(exact_percentile(v, 2), 2.0);
  EXPECT_EQ(exact_percentile(v, 98), 98.0);
  const std::span<const float> ch[] = {v};
  const auto b = stretch_bounds(ch, StretchMode::per_channel, true);
  EXPECT_EQ(b.low[0], 2.0f);
  EXPECT_EQ(b.high[0], 98.0f);
}

TEST(Percentile, NearestRank) {
  EXPECT_EQ(nearest_rank(2, 100), 2u);
  EXPECT_EQ(nearest_rank(98, 100), 98u);
  EXPECT_EQ(nearest_rank(0, 10), 1u);
  EXPECT_EQ(nearest_rank(2, 10), 1u);
  EXPECT_EQ(nearest_rank(100, 10), 10u);
}

TEST(Percentile, MatchesSortOracle) {
  std::mt19937_64 rng(2);
  std::lognormal_distribution<float> d(3.0f, 1.0f);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<float> v(1 + rng() % 5000);
    for (auto& x : v) x = d(rng);
    for (double p : {2.0, 50.0, 98.0}) EXPECT_EQ(exact_percentile(v, p), sort_percentile(v, p));
  }
}

TEST(Percentile, IgnoresNan) {
  std::vector<float> v{NAN, 1, 2, 3, NAN};
  EXPECT_EQ(exact_percentile(v, 100), 3.0);
  std::vector<float> all_nan{NAN};
  EXPECT_THROW(exact_percentile(all_nan, 50), Error);
}

TEST(Histogram, BinsAndPercentileWithinOneBin) {
  std::mt19937_64 rng(3);
  std::normal_distribution<float> d(100.0f, 15.0f);
  std::vector<float> v(200000);
  for (auto& x : v) x = d(rng);
  const Histogram h = Histogram::of(v);
  EXPECT_EQ(h.total(), v.size());
  const double width = (h.high() - h.low()) / Histogram::kBins;
  for (double p : {2.0, 98.0}) EXPECT_NEAR(h.percentile(p), sort_percentile(v, p), width);
  EXPECT_EQ(h.bin_of(h.low()), 0u);
  EXPECT_EQ(h.bin_of(h.high()), Histogram::kBins - 1);
}

TEST(Histogram, UniformValueUsesOneBin) {
  std::vector<float> v(1000, 42.0f);
  const Histogram h = Histogram::of(v);
  std::size_t occupied = 0;
  for (auto c : h.counts()) occupied += c > 0;
  EXPECT_EQ(occupied, 1u);
  EXPECT_EQ(h.percentile(2), 42.0);
}

TEST(Histogram, Merge) {
  Histogram a(0, 10), b(0, 10);
  a.add(1);
  b.add(9);
  b.add(9.5);
  a.merge(b);
  EXPECT_EQ(a.total(), 3u);
}

TEST(Stretch, ConstantImageGivesMidGray) {
  std::vector<float> v(50, 7.0f);
  const std::span<const float> ch[] = {v};
  const auto b = stretch_bounds(ch, StretchMode::per_channel);
  EXPECT_EQ(b.low[0], b.high[0]);
  EXPECT_EQ(stretch_unit(7.0f, b.low[0], b.high[0]), 0.5f);
  EXPECT_EQ(stretch_byte(7.0f, b.low[0], b.high[0]), 128);
}

TEST(Stretch, CommonPoolsChannels) {
  std::vector<float> a(100), c(100);
  std::iota(a.begin(), a.end(), 1.0f);    // 1..100
  std::iota(c.begin(), c.end(), 101.0f);  // 101..200
  const std::span<const float> ch[] = {a, c};
  const auto per = stretch_bounds(ch, StretchMode::per_channel, true);
  EXPECT_EQ(per.low[0], 2.0f);
  EXPECT_EQ(per.low[1], 102.0f);
  const auto common = stretch_bounds(ch, StretchMode::common, true);
  EXPECT_EQ(common.low[0], 4.0f);
  EXPECT_EQ(common.low[1], 4.0f);
  EXPECT_EQ(common.high[0], 196.0f);
  const auto none = stretch_bounds(ch, StretchMode::none, true);
  EXPECT_EQ(none.low[0], 1.0f);
  EXPECT_EQ(none.high[0], 100.0f);
}

TEST(Stretch, InvariantUnderPermutationAndScaling) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<float> d(0.0f, 1000.0f);
  std::vector<float> v(1000);
  for (auto& x : v) x = d(rng);
  std::vector<float> shuffled = v;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  std::vector<float> doubled = v;
  for (auto& x : doubled) x *= 2.0f;
  for (double p : {2.0, 98.0}) {
    EXPECT_EQ(exact_percentile(shuffled, p), exact_percentile(v, p));
    EXPECT_EQ(exact_percentile(doubled, p), 2.0 * exact_percentile(v, p));
  }
  // The stretched image is unchanged by a positive gain on the input.
  const std::span<const float> a[] = {v};
  const std::span<const float> b[] = {doubled};
  const auto ba = stretch_bounds(a, StretchMode::per_channel, true);
  const auto bb = stretch_bounds(b, StretchMode::per_channel, true);
  for (std::size_t i = 0; i < v.size(); ++i)
    EXPECT_EQ(stretch_byte(v[i], ba.low[0], ba.high[0]), stretch_byte(doubled[i], bb.low[0], bb.high[0]));
}

TEST(Stretch, ByteMapping) {
  EXPECT_EQ(stretch_byte(0.0f, 0.0f, 10.0f), 0);
  EXPECT_EQ(stretch_byte(10.0f, 0.0f, 10.0f), 255);
  EXPECT_EQ(stretch_byte(-5.0f, 0.0f, 10.0f), 0);
  EXPECT_EQ(stretch_byte(50.0f, 0.0f, 10.0f), 255);
  EXPECT_EQ(stretch_byte(5.0f, 0.0f, 10.0f), 128);
}

TEST(Stretch, ModeNames) {
  EXPECT_EQ(to_string(StretchMode::per_channel), "per-channel");
  EXPECT_EQ(parse_stretch_mode("per-channel"), StretchMode::per_channel);
  EXPECT_EQ(parse_stretch_mode("per_channel"), StretchMode::per_channel);
  EXPECT_EQ(parse_stretch_mode("common"), StretchMode::common);
  EXPECT_EQ(parse_stretch_mode("none"), StretchMode::none);
  EXPECT_FALSE(parse_stretch_mode("x"));
}

}  // namespace
