#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "beadforge/embed.hpp"
#include "beadforge/errors.hpp"
#include "beadforge/stats.hpp"

using namespace beadforge;

namespace {

std::shared_ptr<const RootedTree> proxy(double alpha, int n, RngStream& r) {
  return std::make_shared<const RootedTree>(grow_alpha_theta(alpha, 1.0 - alpha, n, r));
}

}  // namespace

TEST(Embed, StartConfigMassesSumToOne) {
  for (std::uint64_t i = 0; i < 30; ++i) {
    RngStream r(1, i);
    const auto c = ford_start_config(proxy(0.4, 500, r), 0.4, r);
    const auto m = c.masses();
    EXPECT_NEAR(std::accumulate(m.begin(), m.end(), 0.0), 1.0, 1e-9);
    for (double x : m) EXPECT_GE(x, 0.0);
    for (const auto& b : c.branches) EXPECT_NO_THROW(validate(b));
  }
}

TEST(Embed, PartitionPlacesFirstLabelAtRhoTheta) {
  for (std::uint64_t i = 0; i < 30; ++i) {
    RngStream r(2, i);
    const auto c = ford_start_config(proxy(0.5, 400, r), 0.5, r);
    const auto p = partition_cutpoints(c, 0.5, 8, r);
    ASSERT_EQ(p.labels.size(), 7u);
    EXPECT_EQ(p.labels.front(), 2);
    EXPECT_EQ(p.y.front(), (AtomLoc{4, 0}));
    // Cut indices increase on each branch.
    std::vector<int> last(3, -1);
    for (const auto& cut : p.cuts.cuts) {
      EXPECT_GT(cut.atom_index, last[cut.string_index]);
      last[cut.string_index] = cut.atom_index;
    }
  }
}

TEST(Embed, MergeSpineInvariants) {
  for (std::uint64_t i = 0; i < 30; ++i) {
    RngStream r(3, i);
    const auto c = ford_start_config(proxy(0.5, 400, r), 0.5, r);
    const auto p = partition_cutpoints(c, 0.5, 6, r);
    const auto s = merge_spine(c, p);
    ASSERT_NO_THROW(validate(s));
    EXPECT_NEAR(s.total_mass(), 1.0, 1e-9);
    double len = 0;
    for (const auto& b : c.branches) len += b.length;
    EXPECT_NEAR(s.branches[0].length, len, 1e-9);
    EXPECT_NEAR(s.rho_theta_position, c.branches[0].length, 1e-12);
    // Labels form a partition of the outstanding set.
    std::set<int> seen;
    for (const auto& br : s.branches)
      for (const auto& b : br.beads)
        for (int l : b.labels) EXPECT_TRUE(seen.insert(l).second);
    EXPECT_EQ(std::vector<int>(seen.begin(), seen.end()), s.outstanding);
  }
}

TEST(Embed, RecursiveEmbedLevels) {
  for (std::uint64_t i = 0; i < 10; ++i) {
    RngStream r(4, i);
    EmbedOptions opt;
    opt.regrow_leaves = 300;
    const auto levels = recursive_embed(proxy(0.5, 600, r), 0.5, 4, 12, r, opt);
    ASSERT_EQ(levels.size(), 4u);
    for (std::size_t k = 0; k < levels.size(); ++k) {
      EXPECT_NO_THROW(validate(levels[k]));
      EXPECT_EQ(levels[k].branches.size(), k + 1);
      EXPECT_NEAR(levels[k].total_mass(), 1.0, 1e-9);
      if (k > 0) {
        EXPECT_NEAR(levels[k].branches[0].length, levels[k - 1].branches[0].length, 1e-9);
      }
    }
  }
}

TEST(Embed, TwoLeafSummarySums) {
  RngStream r(5, 5);
  const auto levels = recursive_embed(proxy(0.5, 500, r), 0.5, 2, 8, r);
  const auto s = two_leaf_summary(levels[1]);
  EXPECT_GT(s[0], 0.0);
  EXPECT_LE(s[1] + s[2] + s[3], 1.0 + 1e-9);
  EXPECT_THROW(two_leaf_summary(levels[0]), ParameterError);
}

TEST(Embed, BrownianAndFordStartsAgree) {
  const int reps = 1500;
  std::array<std::vector<double>, 5> a, b;
  for (int i = 0; i < reps; ++i) {
    RngStream r1(6, i), r2(7, i);
    std::array<double, 5> ma{}, mb{};
    for (;;) {
      try {
        ma = brownian_start_config(proxy(0.5, 1000, r1), r1).masses();
        break;
      } catch (const DomainError&) {
      }
    }
    mb = ford_start_config(proxy(0.5, 1000, r2), 0.5, r2).masses();
    for (int k = 0; k < 5; ++k) {
      a[k].push_back(ma[k]);
      b[k].push_back(mb[k]);
    }
  }
  int passed = 0;
  for (int k = 0; k < 5; ++k) passed += ks_two_sample(a[k], b[k]).passed;
  EXPECT_GE(passed, 4);
}

TEST(Embed, DensityIdentity) {
  for (auto [a, t] : std::vector<std::pair<double, double>>{{0.5, 1.5}, {0.3, 0.7}, {0.6, 2.0}})
    for (double u : {0.6, 0.75, 0.9}) {
      const auto d = densities(a, t, u);
      EXPECT_GT(d.f, 0.0);
      EXPECT_GT(d.f_star, 0.0);
      EXPECT_NEAR(d.f_o, d.f_star, 1e-10 * std::max(1.0, std::abs(d.f_o)));
      EXPECT_NEAR(dislocation_four_term(a, t, u), dislocation_four_term(a, t, 1.0 - u), 1e-10 * std::abs(d.f_o));
    }
  EXPECT_TRUE(std::isnan(densities(0.5, 1.5, 0.3).f_o));
  EXPECT_THROW(densities(0.5, 1.5, 1.0), DomainError);
  EXPECT_THROW(densities(1.5, 1.5, 0.5), ParameterError);
}

TEST(Embed, DensitiesCsvHasHeaderAndRows) {
  const auto csv = densities_csv(0.5, 1.5, 10);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 11);
}
