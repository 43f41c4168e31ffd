#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "corrdet/rng.hpp"

using namespace corrdet;

namespace {

void expect_block(Philox4x32::Counter ctr, Philox4x32::Key key, Philox4x32::Counter want) {
  EXPECT_EQ(Philox4x32::generate(ctr, key), want);
}

}  // namespace

TEST(Philox, KnownAnswerZero) {
  expect_block({0, 0, 0, 0}, {0, 0}, {0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
}

TEST(Philox, KnownAnswerOnes) {
  expect_block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff},
               {0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
}

TEST(Philox, KnownAnswerPi) {
  expect_block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0},
               {0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST(CounterRng, BlockIsPureFunctionOfIndex) {
  const CounterRng a(StreamId{42, purpose::kData, 7});
  const CounterRng b(StreamId{42, purpose::kData, 7});
  for (std::uint64_t j : {0ull, 1ull, 123456789ull, (1ull << 40) + 3}) EXPECT_EQ(a.block(j), b.block(j));
}

TEST(CounterRng, StreamsDiffer) {
  std::set<std::uint64_t> seen;
  for (std::uint32_t purpose_tag : {1u, 2u, 3u}) {
    for (std::uint32_t index : {0u, 1u}) {
      for (std::uint64_t seed : {0ull, 1ull, 1ull << 33}) {
        seen.insert(CounterRng(StreamId{seed, purpose_tag, index}).block(0)[0]);
      }
    }
  }
  EXPECT_EQ(seen.size(), 18u);
}

TEST(CounterRng, UniformsInOpenInterval) {
  EXPECT_GT(to_open_unit(0), 0.0);
  EXPECT_LT(to_open_unit(~0ull), 1.0);
  const CounterRng rng(StreamId{1, 1, 0});
  double sum = 0.0;
  const int count = 200000;
  for (int j = 0; j < count; ++j) {
    const auto [u, v] = rng.uniform_pair(j);
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u + v;
  }
  EXPECT_NEAR(sum / (2.0 * count), 0.5, 4.0 * std::sqrt(1.0 / 12.0 / (2.0 * count)));
}

TEST(CounterRng, NormalMoments) {
  const CounterRng rng(StreamId{5, 1, 0});
  const int count = 200000;
  double s1 = 0.0, s2 = 0.0;
  for (int j = 0; j < count; ++j) {
    const double z = rng.normal(j);
    s1 += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s1 / count, 0.0, 4.0 / std::sqrt(count));
  EXPECT_NEAR(s2 / count, 1.0, 4.0 * std::sqrt(2.0 / count));
}

TEST(RngCursor, UsesBothHalvesOfABlock) {
  const StreamId id{3, 4, 5};
  RngCursor cursor(id);
  const auto pair = CounterRng(id).uniform_pair(0);
  EXPECT_EQ(cursor.uniform(), pair[0]);
  EXPECT_EQ(cursor.uniform(), pair[1]);
  EXPECT_EQ(cursor.uniform(), CounterRng(id).uniform_pair(1)[0]);
}

class GammaShape : public ::testing::TestWithParam<double> {};

TEST_P(GammaShape, MeanAndVarianceMatchShape) {
  const double shape = GetParam();
  RngCursor cursor(StreamId{11, 3, 0});
  const int count = 100000;
  double s1 = 0.0, s2 = 0.0;
  for (int k = 0; k < count; ++k) {
    const double g = sample_gamma(cursor, shape);
    ASSERT_GT(g, 0.0);
    s1 += g;
    s2 += g * g;
  }
  const double mean = s1 / count;
  const double var = s2 / count - mean * mean;
  EXPECT_NEAR(mean, shape, 4.0 * std::sqrt(shape / count));
  EXPECT_NEAR(var / shape, 1.0, 0.05);
}

INSTANTIATE_TEST_SUITE_P(Shapes, GammaShape, ::testing::Values(0.5, 1.0, 3.0, 25.0, 400.0));

TEST(Gamma, RejectsNonPositiveShape) {
  RngCursor cursor(StreamId{});
  EXPECT_THROW(sample_gamma(cursor, 0.0), std::invalid_argument);
}
