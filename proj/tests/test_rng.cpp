#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "infousage/rng.hpp"

using namespace infousage;

// Known-answer vectors for Philox4x32-10 from the Random123 distribution.
TEST(Philox, KnownAnswerZero) {
  const auto out = philox4x32({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out[0], 0x6627e8d5u);
  EXPECT_EQ(out[1], 0xe169c58du);
  EXPECT_EQ(out[2], 0xbc57ac4cu);
  EXPECT_EQ(out[3], 0x9b00dbd8u);
}

TEST(Philox, KnownAnswerOnes) {
  const auto out = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                              {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(out[0], 0x408f276du);
  EXPECT_EQ(out[1], 0x41c83b0eu);
  EXPECT_EQ(out[2], 0xa20bc7c6u);
  EXPECT_EQ(out[3], 0x6d5451fdu);
}

TEST(Philox, KnownAnswerPi) {
  const auto out = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                              {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(out[0], 0xd16cfe09u);
  EXPECT_EQ(out[1], 0x94fdccebu);
  EXPECT_EQ(out[2], 0x5001e420u);
  EXPECT_EQ(out[3], 0x24126ea1u);
}

TEST(CounterRng, SameCoordinatesSameStream) {
  CounterRng a(42, 7, Stream::noise), b(42, 7, Stream::noise);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(CounterRng, CoordinatesSeparateStreams) {
  std::set<std::uint64_t> first;
  first.insert(CounterRng(1, 0, Stream::noise)());
  first.insert(CounterRng(1, 1, Stream::noise)());
  first.insert(CounterRng(2, 0, Stream::noise)());
  first.insert(CounterRng(1, 0, Stream::selection)());
  EXPECT_EQ(first.size(), 4u);
}

TEST(CounterRng, UniformMoments) {
  CounterRng rng(3, 0, Stream::noise);
  const int N = 200000;
  double s = 0, s2 = 0;
  for (int i = 0; i < N; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    s += u;
    s2 += u * u;
  }
  EXPECT_NEAR(s / N, 0.5, 4 * std::sqrt(1.0 / 12 / N));
  EXPECT_NEAR(s2 / N - (s / N) * (s / N), 1.0 / 12, 2e-3);
}

TEST(CounterRng, NormalMoments) {
  CounterRng rng(4, 0, Stream::noise);
  const int N = 200000;
  double s = 0, s2 = 0;
  for (int i = 0; i < N; ++i) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / N, 0.0, 4 / std::sqrt(N));
  EXPECT_NEAR(s2 / N, 1.0, 0.02);
}

TEST(CounterRng, BelowIsUniformAndInRange) {
  CounterRng rng(5, 0, Stream::selection);
  std::vector<int> counts(7, 0);
  const int N = 70000;
  for (int i = 0; i < N; ++i) {
    const auto v = rng.below(7);
    ASSERT_LT(v, 7u);
    ++counts[v];
  }
  for (int c : counts) EXPECT_NEAR(c, N / 7.0, 5 * std::sqrt(N / 7.0));
}

TEST(Mix64, OrderMatters) {
  EXPECT_NE(mix64(1, 2), mix64(2, 1));
  EXPECT_EQ(mix64(9, 9), mix64(9, 9));
}
