#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "beadforge/parallel.hpp"
#include "beadforge/rng.hpp"

using namespace beadforge;

TEST(Rng, SameKeySameSequence) {
  RngStream a(7, 3), b(7, 3);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next(), b.next());
}

TEST(Rng, DistinctStreamsDiffer) {
  std::set<std::uint64_t> first;
  for (std::uint64_t s = 0; s < 1000; ++s) first.insert(RngStream(1, s).next());
  EXPECT_EQ(first.size(), 1000u);
  EXPECT_NE(RngStream(1, 0).next(), RngStream(2, 0).next());
}

TEST(Rng, UniformOpenInterval) {
  RngStream r(1, 1);
  double lo = 1, hi = 0, sum = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 3 * std::sqrt(1.0 / 12 / n));
}

TEST(Rng, BelowCoversRangeUniformly) {
  RngStream r(3, 9);
  std::vector<int> c(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const auto v = r.below(7);
    ASSERT_LT(v, 7u);
    ++c[v];
  }
  for (int x : c) EXPECT_NEAR(x, n / 7.0, 5 * std::sqrt(n / 7.0));
}

TEST(Rng, NormalMoments) {
  RngStream r(5, 5);
  const int n = 100000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 4 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 4 * std::sqrt(2.0 / n));
}

TEST(Rng, StreamIdSeparatesTags) {
  EXPECT_NE(stream_id(1, 0), stream_id(2, 0));
  EXPECT_EQ(stream_id(0, 5), 5u);
}

TEST(Parallel, MatchesSerialReference) {
  auto f = [](std::size_t i) {
    RngStream r(11, i);
    double s = 0;
    for (int k = 0; k < 100; ++k) s += r.uniform();
    return s;
  };
  const auto serial = replicate_serial<double>(500, f);
  for (int jobs : {1, 2, 8}) EXPECT_EQ(replicate<double>(500, jobs, f), serial);
}

TEST(Parallel, RethrowsLowestIndexError) {
  auto f = [](std::size_t i) -> int {
    if (i == 3 || i == 7) throw std::runtime_error("boom " + std::to_string(i));
    return static_cast<int>(i);
  };
  try {
    replicate<int>(10, 4, f);
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "boom 3");
  }
}
