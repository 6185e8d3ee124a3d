#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace beadforge {

inline constexpr double kSignificance = 0.01;
inline constexpr double kMomentZ = 3.0;

struct TestReport {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  std::optional<double> p_value;
  std::vector<std::int64_t> n_samples;
  bool passed = false;
  std::uint64_t seed = 0;
};

// One JSON object, no trailing newline.
std::string to_json_line(const TestReport& r);

// Kolmogorov limiting survival function P(K > lambda).
double kolmogorov_survival(double lambda);

// Regularized incomplete beta I_x(a, b).
double beta_cdf(double x, double a, double b);

// Two-sample Kolmogorov-Smirnov. Both samples need at least 50 points.
TestReport ks_two_sample(std::vector<double> a, std::vector<double> b);

// One-sample KS against Beta(a, b).
TestReport ks_one_sample_beta(std::vector<double> sample, double a, double b);

// Goodness of fit; bins with expected count below 5 are pooled.
TestReport chi_square_gof(const std::vector<std::int64_t>& observed,
                          const std::vector<double>& expected_probabilities);

// Two-row contingency test of equal category laws.
TestReport chi_square_homogeneity(const std::vector<std::int64_t>& a,
                                  const std::vector<std::int64_t>& b);

// |mean - target| <= 3 SE, SE = sqrt(target_variance / n).
TestReport moment_z_test(const std::vector<double>& sample, double target_mean,
                         double target_variance);

// Two independent samples, equal means within 3 pooled SE.
TestReport two_sample_mean_test(const std::vector<double>& a, const std::vector<double>& b);

using ShapeHistogramCounts = std::map<std::string, std::int64_t>;

double tv_distance(const ShapeHistogramCounts& h1, const ShapeHistogramCounts& h2);
double tv_distance(const std::vector<double>& p, const std::vector<double>& q);

double mean(const std::vector<double>& x);
double variance(const std::vector<double>& x);

}  // namespace beadforge
