#include <gtest/gtest.h>

#include <atomic>
#include <stdexcept>
#include <vector>

#include "corrdet/parallel.hpp"

using namespace corrdet;

TEST(ParallelFor, VisitsEachIndexOnce) {
  for (unsigned workers : {1u, 2u, 3u, 8u, 0u}) {
    std::vector<std::atomic<int>> hits(1001);
    parallel_for(hits.size(), workers, [&](std::size_t k) { ++hits[k]; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

TEST(ParallelFor, EmptyRange) {
  bool called = false;
  parallel_for(0, 4, [&](std::size_t) { called = true; });
  EXPECT_FALSE(called);
}

TEST(ParallelFor, PropagatesFirstChunkError) {
  try {
    parallel_for(100, 4, [](std::size_t k) {
      if (k == 10) throw std::runtime_error("early");
      if (k == 90) throw std::runtime_error("late");
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "early");
  }
}
