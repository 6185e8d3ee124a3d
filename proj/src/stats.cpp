#include "beadforge/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <json.hpp>

#include "beadforge/errors.hpp"

namespace beadforge {

namespace {

double chi_square_p(double stat, int df) {
  if (df <= 0) return 1.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * stat);
}

TestReport finish_p(TestReport r) {
  r.threshold = kSignificance;
  r.passed = r.p_value.value() > kSignificance;
  return r;
}

}  // namespace

std::string to_json_line(const TestReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["statistic"] = r.statistic;
  j["threshold"] = r.threshold;
  if (r.p_value) {
    j["p_value"] = *r.p_value;
  } else {
    j["p_value"] = nullptr;
  }
  j["n_samples"] = r.n_samples;
  j["passed"] = r.passed;
  j["seed"] = r.seed;
  return j.dump();
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // Jacobi theta form converges fast for small lambda.
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j) {
      const double k = 2.0 * j - 1.0;
      sum += std::exp(-k * k * pi2 / (8.0 * lambda * lambda));
    }
    const double cdf = std::sqrt(2.0 * std::numbers::pi) / lambda * sum;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 == 1) ? term : -term;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double beta_cdf(double x, double a, double b) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return boost::math::ibeta(a, b, x);
}

TestReport ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.size() < 50 || b.size() < 50) throw ParameterError("ks_two_sample: need at least 50 points per sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  TestReport r;
  r.name = "ks_two_sample";
  r.statistic = d;
  r.p_value = kolmogorov_survival(std::sqrt(na * nb / (na + nb)) * d);
  r.n_samples = {static_cast<std::int64_t>(a.size()), static_cast<std::int64_t>(b.size())};
  return finish_p(r);
}

TestReport ks_one_sample_beta(std::vector<double> sample, double a, double b) {
  if (sample.size() < 50) throw ParameterError("ks_one_sample_beta: need at least 50 points");
  if (!(a > 0.0) || !(b > 0.0)) throw ParameterError("ks_one_sample_beta: shapes must be positive");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = beta_cdf(sample[i], a, b);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  TestReport r;
  r.name = "ks_one_sample_beta";
  r.statistic = d;
  r.p_value = kolmogorov_survival(std::sqrt(n) * d);
  r.n_samples = {static_cast<std::int64_t>(sample.size())};
  return finish_p(r);
}

TestReport chi_square_gof(const std::vector<std::int64_t>& observed,
                          const std::vector<double>& expected_probabilities) {
  if (observed.size() != expected_probabilities.size() || observed.empty())
    throw ParameterError("chi_square_gof: dimension mismatch");
  double psum = 0.0;
  for (double p : expected_probabilities) {
    if (p < 0.0) throw ParameterError("chi_square_gof: negative probability");
    psum += p;
  }
  if (std::abs(psum - 1.0) > 1e-9) throw ParameterError("chi_square_gof: probabilities must sum to 1");
  std::int64_t total = 0;
  for (auto o : observed) total += o;

  // Pool small bins (expected < 5) into one bin.
  double stat = 0.0;
  int bins = 0;
  double pooled_e = 0.0;
  std::int64_t pooled_o = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = expected_probabilities[i] * static_cast<double>(total);
    if (e < 5.0) {
      pooled_e += e;
      pooled_o += observed[i];
      continue;
    }
    stat += (observed[i] - e) * (observed[i] - e) / e;
    ++bins;
  }
  if (pooled_e > 0.0) {
    stat += (pooled_o - pooled_e) * (pooled_o - pooled_e) / pooled_e;
    ++bins;
  } else if (pooled_o > 0) {
    stat = INFINITY;  // mass where none is expected
  }
  TestReport r;
  r.name = "chi_square_gof";
  r.statistic = stat;
  r.p_value = std::isfinite(stat) ? chi_square_p(stat, bins - 1) : 0.0;
  r.n_samples = {total};
  return finish_p(r);
}

TestReport chi_square_homogeneity(const std::vector<std::int64_t>& a,
                                  const std::vector<std::int64_t>& b) {
  if (a.size() != b.size() || a.empty()) throw ParameterError("chi_square_homogeneity: dimension mismatch");
  double na = 0, nb = 0;
  for (auto x : a) na += x;
  for (auto x : b) nb += x;
  const double n = na + nb;
  double stat = 0.0;
  int cols = 0;
  double pa = 0, pb = 0;
  auto add = [&](double oa, double ob) {
    const double c = oa + ob;
    const double ea = c * na / n, eb = c * nb / n;
    stat += (oa - ea) * (oa - ea) / ea + (ob - eb) * (ob - eb) / eb;
    ++cols;
  };
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double c = static_cast<double>(a[i] + b[i]);
    if (c * std::min(na, nb) / n < 5.0) {
      pa += a[i];
      pb += b[i];
      continue;
    }
    add(a[i], b[i]);
  }
  if (pa + pb > 0) add(pa, pb);
  TestReport r;
  r.name = "chi_square_homogeneity";
  r.statistic = stat;
  r.p_value = chi_square_p(stat, cols - 1);
  r.n_samples = {static_cast<std::int64_t>(na), static_cast<std::int64_t>(nb)};
  return finish_p(r);
}

double mean(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double variance(const std::vector<double>& x) {
  if (x.size() < 2) return 0.0;
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

TestReport moment_z_test(const std::vector<double>& sample, double target_mean,
                         double target_variance) {
  if (sample.empty()) throw ParameterError("moment_z_test: empty sample");
  if (!(target_variance > 0.0)) throw ParameterError("moment_z_test: variance must be positive");
  const double se = std::sqrt(target_variance / static_cast<double>(sample.size()));
  TestReport r;
  r.name = "moment_z_test";
  r.statistic = std::abs(mean(sample) - target_mean) / se;
  r.threshold = kMomentZ;
  r.n_samples = {static_cast<std::int64_t>(sample.size())};
  r.passed = r.statistic <= kMomentZ;
  return r;
}

TestReport two_sample_mean_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2) throw ParameterError("two_sample_mean_test: samples too small");
  const double se = std::sqrt(variance(a) / a.size() + variance(b) / b.size());
  TestReport r;
  r.name = "two_sample_mean_test";
  r.statistic = se > 0.0 ? std::abs(mean(a) - mean(b)) / se : 0.0;
  r.threshold = kMomentZ;
  r.n_samples = {static_cast<std::int64_t>(a.size()), static_cast<std::int64_t>(b.size())};
  r.passed = r.statistic <= kMomentZ;
  return r;
}

double tv_distance(const ShapeHistogramCounts& h1, const ShapeHistogramCounts& h2) {
  double t1 = 0, t2 = 0;
  for (const auto& [k, v] : h1) t1 += v;
  for (const auto& [k, v] : h2) t2 += v;
  if (t1 <= 0 || t2 <= 0) throw ParameterError("tv_distance: empty histogram");
  std::set<std::string> keys;
  for (const auto& [k, v] : h1) keys.insert(k);
  for (const auto& [k, v] : h2) keys.insert(k);
  double s = 0.0;
  for (const auto& k : keys) {
    const auto i1 = h1.find(k);
    const auto i2 = h2.find(k);
    const double p = i1 == h1.end() ? 0.0 : i1->second / t1;
    const double q = i2 == h2.end() ? 0.0 : i2->second / t2;
    s += std::abs(p - q);
  }
  return 0.5 * s;
}

double tv_distance(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw ParameterError("tv_distance: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

}  // namespace beadforge
