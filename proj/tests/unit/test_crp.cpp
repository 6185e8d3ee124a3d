#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "beadforge/crp.hpp"
#include "beadforge/errors.hpp"
#include "beadforge/reference.hpp"
#include "beadforge/stats.hpp"

using namespace beadforge;

TEST(Crp, PartitionProbabilitiesSumToOne) {
  for (auto [a, t] : std::vector<std::pair<double, double>>{{0.3, 0.7}, {0.5, 0.5}, {0.5, 1.5}, {0.0, 2.0}, {0.9, 0.0}})
    for (int n = 1; n <= 6; ++n) {
      double s = 0;
      for (const auto& b : reference::set_partitions(n)) s += partition_probability(a, t, b);
      EXPECT_NEAR(s, 1.0, 1e-10) << a << " " << t << " " << n;
    }
}

TEST(Crp, SetPartitionCountsAreBellNumbers) {
  const std::vector<std::size_t> bell{1, 1, 2, 5, 15, 52, 203};
  for (int n = 0; n <= 6; ++n) EXPECT_EQ(reference::set_partitions(n).size(), bell[n]);
}

TEST(Crp, LogPathAgreesWithDirect) {
  const std::vector<int> b{3, 1, 4, 1, 5};
  EXPECT_NEAR(std::log(partition_probability(0.4, 1.1, b)), log_partition_probability(0.4, 1.1, b), 1e-10);
}

TEST(Crp, Rising) {
  EXPECT_EQ(rising(2.0, 0), 1.0);
  EXPECT_EQ(rising(2.0, 3), 24.0);
  EXPECT_NEAR(rising(0.5, 2), 0.75, 1e-15);
}

TEST(Crp, StateInvariants) {
  RngStream r(1, 1);
  const auto s = run_crp(0.5, 1.5, 5000, r);
  int total = 0;
  std::vector<int> ranks;
  for (const auto& t : s.tables) {
    ASSERT_GT(t.size, 0);
    total += t.size;
    ranks.push_back(t.birth_rank);
  }
  EXPECT_EQ(total, 5000);
  EXPECT_EQ(s.n_customers, 5000);
  std::sort(ranks.begin(), ranks.end());
  for (std::size_t i = 0; i < ranks.size(); ++i) EXPECT_EQ(ranks[i], static_cast<int>(i) + 1);
}

TEST(Crp, RejectsBadParameters) {
  RngStream r(1, 1);
  EXPECT_THROW(run_crp(1.0, 0.5, 10, r), ParameterError);
  EXPECT_THROW(run_crp(0.5, -0.6, 10, r), ParameterError);
  EXPECT_THROW(run_crp(0.0, 0.0, 10, r), ParameterError);
}

// The fast sampler and the step-by-step reference must agree with the
// ordered-CRP composition law.
TEST(Crp, FastAndReferenceSamplersMatchCompositionOracle) {
  const double a = 0.3, t = 0.7;
  const int n = 5;
  const auto law = reference::ordered_crp_compositions(a, t, n);
  std::vector<double> p;
  for (const auto& [c, q] : law) p.push_back(q);
  std::vector<std::int64_t> fast(law.size(), 0), slow(law.size(), 0);
  const int reps = 60000;
  for (int i = 0; i < reps; ++i) {
    RngStream r1(3, i), r2(4, i);
    const auto c1 = composition(run_crp(a, t, n, r1)).parts;
    auto st = empty_crp(a, t);
    for (int k = 0; k < n; ++k) st = crp_step(st, r2);
    const auto c2 = composition(st).parts;
    ++fast[std::distance(law.begin(), law.find(c1))];
    ++slow[std::distance(law.begin(), law.find(c2))];
  }
  EXPECT_TRUE(chi_square_gof(fast, p).passed);
  EXPECT_TRUE(chi_square_gof(slow, p).passed);
}

TEST(Crp, OracleCompositionLawSumsToOne) {
  double s = 0;
  for (const auto& [c, q] : reference::ordered_crp_compositions(0.5, 1.5, 6)) s += q;
  EXPECT_NEAR(s, 1.0, 1e-12);
}

TEST(Crp, CoSeatingProbability) {
  const double a = 0.5, t = 0.5, p = (1 - a) / (1 + t);
  const int reps = 40000;
  int share = 0;
  for (int i = 0; i < reps; ++i) {
    RngStream r(5, i);
    share += run_crp(a, t, 2, r).n_tables() == 1;
  }
  EXPECT_NEAR(static_cast<double>(share) / reps, p, 4 * std::sqrt(p * (1 - p) / reps));
}

TEST(Crp, RegenerativeSetEndpoints) {
  Composition c{{2, 1, 3}, 6};
  const auto s = regenerative_set(c);
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s.front(), 0.0);
  EXPECT_EQ(s.back(), 1.0);
  EXPECT_NEAR(s[1], 1.0 / 3, 1e-15);
}

TEST(Crp, LaplaceExponent) {
  EXPECT_EQ(laplace_exponent(0.3, 0.7, 0.0), 0.0);
  EXPECT_NEAR(laplace_exponent(0.5, 0.5, 1.0), std::numbers::pi / 2, 1e-12);
  double last = 0;
  for (double s = 0.5; s <= 10; s += 0.5) {
    const double v = laplace_exponent(0.5, 1.5, s);
    EXPECT_GT(v, last);
    last = v;
  }
  EXPECT_THROW(laplace_exponent(0.5, 0.5, -1.0), DomainError);
}
