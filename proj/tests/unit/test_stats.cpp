#include <gtest/gtest.h>

#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "beadforge/distributions.hpp"
#include "beadforge/errors.hpp"
#include "beadforge/stats.hpp"

using namespace beadforge;

namespace {

// I_x(a, b) by direct quadrature of the Beta density.
double ibeta_quadrature(double x, double a, double b) {
  boost::math::quadrature::tanh_sinh<double> q;
  const double lognorm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  auto f = [&](double t) { return std::exp(lognorm + (a - 1) * std::log(t) + (b - 1) * std::log1p(-t)); };
  return q.integrate(f, 0.0, x);
}

// 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lambda^2), truncated far beyond double precision.
double kolmogorov_series(double lambda) {
  double s = 0;
  for (int k = 1; k <= 400; ++k) s += (k % 2 ? 2.0 : -2.0) * std::exp(-2.0 * k * k * lambda * lambda);
  return s;
}

}  // namespace

TEST(BetaCdf, MatchesQuadratureOracle) {
  const double cases[20][3] = {{0.1, 0.5, 0.5}, {0.5, 0.5, 0.5}, {0.9, 0.5, 0.5}, {0.3, 1.0, 1.5},
                               {0.7, 1.0, 1.5}, {0.2, 2.0, 3.0}, {0.6, 2.0, 3.0}, {0.05, 0.7, 0.3},
                               {0.95, 0.7, 0.3}, {0.5, 1.5, 0.5}, {0.25, 3.5, 1.2}, {0.75, 3.5, 1.2},
                               {0.4, 0.3, 0.7}, {0.8, 0.3, 0.7}, {0.5, 5.0, 5.0}, {0.33, 1.0, 1.0},
                               {0.12, 0.5, 2.0}, {0.66, 0.5, 2.0}, {0.5, 2.5, 0.8}, {0.99, 1.2, 4.0}};
  for (const auto& c : cases)
    EXPECT_NEAR(beta_cdf(c[0], c[1], c[2]), ibeta_quadrature(c[0], c[1], c[2]), 1e-9)
        << c[0] << " " << c[1] << " " << c[2];
}

TEST(BetaCdf, Endpoints) {
  EXPECT_EQ(beta_cdf(0.0, 0.5, 0.5), 0.0);
  EXPECT_EQ(beta_cdf(1.0, 0.5, 0.5), 1.0);
  EXPECT_NEAR(beta_cdf(0.4, 1.0, 1.0), 0.4, 1e-15);
}

TEST(Kolmogorov, MatchesSeriesOnBothBranches) {
  for (double l = 0.3; l < 3.0; l += 0.05) EXPECT_NEAR(kolmogorov_survival(l), kolmogorov_series(l), 1e-12) << l;
  EXPECT_NEAR(kolmogorov_survival(1.3581), 0.05, 1e-4);
  EXPECT_NEAR(kolmogorov_survival(1.6276), 0.01, 1e-4);
  EXPECT_NEAR(kolmogorov_survival(0.05), 1.0, 1e-12);
}

TEST(Ks, SameLawPassesShiftedLawFails) {
  RngStream r(1, 1);
  std::vector<double> a(4000), b(4000), c(4000);
  for (auto& v : a) v = r.uniform();
  for (auto& v : b) v = r.uniform();
  for (auto& v : c) v = 0.05 + r.uniform();
  EXPECT_TRUE(ks_two_sample(a, b).passed);
  EXPECT_FALSE(ks_two_sample(a, c).passed);
  EXPECT_THROW(ks_two_sample({1, 2, 3}, b), ParameterError);
}

TEST(Ks, TiesDoNotInflateStatistic) {
  std::vector<double> a(100, 1.0), b(100, 1.0);
  EXPECT_EQ(ks_two_sample(a, b).statistic, 0.0);
}

TEST(Ks, OneSampleBeta) {
  RngStream r(2, 2);
  std::vector<double> x(5000);
  for (auto& v : x) v = sample_beta(1.0, 1.5, r);
  EXPECT_TRUE(ks_one_sample_beta(x, 1.0, 1.5).passed);
  EXPECT_FALSE(ks_one_sample_beta(x, 1.0, 2.5).passed);
}

TEST(ChiSquare, GoodnessOfFit) {
  const auto exact = chi_square_gof({250, 250, 500}, {0.25, 0.25, 0.5});
  EXPECT_NEAR(exact.statistic, 0.0, 1e-12);
  EXPECT_NEAR(*exact.p_value, 1.0, 1e-12);
  EXPECT_FALSE(chi_square_gof({400, 100, 500}, {0.25, 0.25, 0.5}).passed);
  // 2 degrees of freedom: p = exp(-x/2).
  const auto r = chi_square_gof({260, 240, 500}, {0.25, 0.25, 0.5});
  EXPECT_NEAR(*r.p_value, std::exp(-r.statistic / 2), 1e-12);
}

TEST(ChiSquare, Homogeneity) {
  EXPECT_TRUE(chi_square_homogeneity({100, 200, 300}, {110, 190, 300}).passed);
  EXPECT_FALSE(chi_square_homogeneity({100, 200, 300}, {300, 200, 100}).passed);
}

TEST(Moments, ZTest) {
  std::vector<double> x{0.0, 1.0, 0.0, 1.0};
  EXPECT_TRUE(moment_z_test(x, 0.5, 0.25).passed);
  std::vector<double> y(10000, 1.0);
  EXPECT_FALSE(moment_z_test(y, 0.5, 0.25).passed);
}

TEST(Tv, Distance) {
  EXPECT_DOUBLE_EQ(tv_distance(std::vector<double>{0.5, 0.5}, std::vector<double>{1.0, 0.0}), 0.5);
  ShapeHistogramCounts a{{"x", 3}, {"y", 1}}, b{{"x", 1}, {"z", 1}};
  EXPECT_DOUBLE_EQ(tv_distance(a, b), 0.5 * (0.25 + 0.25 + 0.5));
}

TEST(Report, JsonLineIsOneLine) {
  TestReport r;
  r.name = "n";
  r.p_value = 0.5;
  const auto s = to_json_line(r);
  EXPECT_EQ(s.find('\n'), std::string::npos);
  EXPECT_NE(s.find("\"p_value\":0.5"), std::string::npos);
}
