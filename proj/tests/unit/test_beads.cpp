#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "beadforge/beads.hpp"
#include "beadforge/crp.hpp"
#include "beadforge/distributions.hpp"
#include "beadforge/errors.hpp"
#include "beadforge/stats.hpp"

using namespace beadforge;

namespace {

StringOfBeads make(std::vector<double> masses, double length) {
  StringOfBeads s;
  double total = std::accumulate(masses.begin(), masses.end(), 0.0);
  for (std::size_t i = 0; i < masses.size(); ++i) s.atoms.push_back({(i + 1.0) * length / (masses.size() + 1), masses[i] / total});
  s.length = length;
  s.total_mass = 1.0;
  return s;
}

}  // namespace

TEST(Beads, FromCrpSingleCustomer) {
  RngStream r(1, 1);
  const auto s = beads_from_crp(run_crp(0.5, 0.5, 1, r));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.atoms[0].position, 1.0);
  EXPECT_EQ(s.atoms[0].mass, 1.0);
}

TEST(Beads, FromCrpIsValid) {
  for (std::uint64_t i = 0; i < 50; ++i) {
    RngStream r(2, i);
    const auto s = beads_from_crp(run_crp(0.3, 0.7, 500, r));
    EXPECT_NO_THROW(validate(s));
    EXPECT_NEAR(s.total_mass, 1.0, 1e-9);
  }
}

TEST(Beads, ValidateRejectsBrokenStrings) {
  StringOfBeads s = make({1, 1}, 1.0);
  s.atoms[1].position = s.atoms[0].position;
  EXPECT_THROW(validate(s), ParameterError);
  s = make({1, 1}, 1.0);
  s.total_mass = 0.5;
  EXPECT_THROW(validate(s), ParameterError);
  s = make({1, 1}, 1.0);
  s.length = 0.1;
  EXPECT_THROW(validate(s), ParameterError);
}

TEST(CoinToss, SwitchingProbability) {
  EXPECT_EQ(switching_probability(0.0, 0.3, 0.7), 1.0);
  EXPECT_NEAR(switching_probability(0.25, 0.4, 0.4), 0.75, 1e-15);
}

TEST(CoinToss, SingleAtomAlwaysSelected) {
  RngStream r(1, 1);
  const auto [i, split] = coin_toss_sample(make({1.0}, 1.0), 0.5, 1.5, r);
  EXPECT_EQ(i, 0u);
  EXPECT_EQ(split.atom, 1.0);
}

TEST(CoinToss, EqualParametersGiveSizeBiasedPick) {
  const auto s = make({0.1, 0.4, 0.2, 0.3}, 2.0);
  const auto p = coin_toss_probabilities(s, 0.45, 0.45);
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(p[i], s.atoms[i].mass, 1e-12);
}

TEST(CoinToss, SamplerMatchesExactProbabilities) {
  const auto s = make({0.3, 0.05, 0.2, 0.15, 0.3}, 1.0);
  const auto p = coin_toss_probabilities(s, 0.3, 1.7);
  EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
  std::vector<std::int64_t> counts(p.size(), 0);
  RngStream r(7, 7);
  for (int i = 0; i < 50000; ++i) ++counts[coin_toss_sample(s, 0.3, 1.7, r).first];
  EXPECT_TRUE(chi_square_gof(counts, p).passed);
}

TEST(Split, FirstAtomLeavesEmptyPrefix) {
  const auto r = split_at(make({0.5, 0.5}, 1.0), 0, 0.5);
  EXPECT_TRUE(r.prefix.empty);
  EXPECT_FALSE(r.suffix.empty);
  EXPECT_NEAR(r.suffix.total_mass, 1.0, 1e-12);
}

TEST(Split, ConcatRoundTrip) {
  for (std::uint64_t k = 0; k < 100; ++k) {
    RngStream r(9, k);
    const auto s = beads_from_crp(run_crp(0.5, 1.0, 200, r));
    if (s.size() < 3) continue;
    const std::size_t idx = 1 + r.below(s.size() - 2);
    const auto sp = split_at(s, idx, 0.5);
    double pm = 0;
    for (const auto& a : sp.prefix.atoms) pm += a.mass;
    EXPECT_NEAR(pm, 1.0, 1e-12);
    const auto back = concat_beads(sp.split.before, sp.split.before + sp.split.atom, sp.prefix, sp.suffix, 0.5);
    ASSERT_EQ(back.size(), s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      EXPECT_NEAR(back.atoms[i].mass, s.atoms[i].mass, 1e-9);
      EXPECT_NEAR(back.atoms[i].position, s.atoms[i].position, 1e-9);
    }
    EXPECT_NEAR(back.length, s.length, 1e-9);
  }
}

TEST(Concat, LengthAndMass) {
  const auto l = make({1, 2}, 2.0), rr = make({3}, 5.0);
  const double G = 0.3, D = 0.6, a = 0.4;
  const auto c = concat_beads(G, D, l, rr, a);
  EXPECT_NEAR(c.total_mass, 1.0, 1e-12);
  EXPECT_NEAR(c.length, std::pow(G, a) * 2.0 + std::pow(1 - D, a) * 5.0, 1e-12);
  EXPECT_THROW(concat_beads(0.6, 0.3, l, rr, a), ParameterError);
}

TEST(StickBreaking, StickMassesFollowBetaOneTheta) {
  const int n = 4000;
  std::vector<double> first(n);
  for (int i = 0; i < n; ++i) {
    RngStream r(11, i);
    const auto b = beads_via_stick_breaking(0.5, 1.5, 3, 50, r);
    EXPECT_NEAR(b.beads.total_mass + b.residual_mass, 1.0, 1e-9);
    first[i] = b.stick_masses[0];
  }
  EXPECT_TRUE(ks_one_sample_beta(first, 1.0, 1.5).passed);
}

TEST(StickBreaking, LargestAtomMatchesDirectString) {
  const int n = 2000;
  std::vector<double> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    RngStream r1(12, i), r2(13, i);
    a[i] = largest_mass(beads_via_stick_breaking(0.5, 1.5, 50, 1000, r1).beads);
    b[i] = largest_mass(beads_from_crp(run_crp(0.5, 1.5, 10000, r2)));
  }
  EXPECT_TRUE(ks_two_sample(a, b).passed);
}

TEST(Beads, RankedAndMatch) {
  const auto s = make({0.2, 0.5, 0.3}, 1.0);
  EXPECT_EQ(ranked_masses(s, 5), (std::vector<double>{0.5, 0.3, 0.2, 0.0, 0.0}));
  EXPECT_NEAR(match_probability(s), 0.04 + 0.25 + 0.09, 1e-12);
  EXPECT_NE(to_csv(s).find("atom_index,position,mass\n0,"), std::string::npos);
}
