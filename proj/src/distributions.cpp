#include "beadforge/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "beadforge/errors.hpp"

namespace beadforge {

double sample_log_gamma(double shape, RngStream& rng) {
  require(shape > 0.0, "gamma: shape must be positive");
  if (shape < 1.0) {
    // G(a) = G(a+1) * U^(1/a)
    return sample_log_gamma(shape + 1.0, rng) + std::log(rng.uniform()) / shape;
  }
  // Marsaglia-Tsang.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return std::log(d * v);
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return std::log(d * v);
  }
}

double sample_gamma(double shape, RngStream& rng) { return std::exp(sample_log_gamma(shape, rng)); }

namespace {

double clamp_open(double x) {
  const double lo = std::numeric_limits<double>::min();
  const double hi = std::nextafter(1.0, 0.0);
  return std::clamp(x, lo, hi);
}

}  // namespace

double sample_beta(double a, double b, RngStream& rng) {
  if (!(a > 0.0) || !(b > 0.0)) throw ParameterError("sample_beta: parameters must be positive");
  const double lx = sample_log_gamma(a, rng);
  const double ly = sample_log_gamma(b, rng);
  return clamp_open(1.0 / (1.0 + std::exp(ly - lx)));
}

SimplexVector sample_dirichlet(const std::vector<double>& theta, RngStream& rng) {
  if (theta.empty()) throw ParameterError("sample_dirichlet: empty parameter list");
  for (double t : theta)
    if (!(t > 0.0)) throw ParameterError("sample_dirichlet: parameters must be positive");
  SimplexVector out;
  if (theta.size() == 1) {
    out.weights = {1.0};
    return out;
  }
  std::vector<double> lg(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) lg[i] = sample_log_gamma(theta[i], rng);
  const double top = *std::max_element(lg.begin(), lg.end());
  double sum = 0.0;
  out.weights.resize(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    out.weights[i] = std::exp(lg[i] - top);
    sum += out.weights[i];
  }
  for (auto& w : out.weights) w = std::max(w / sum, std::numeric_limits<double>::min());
  return out;
}

std::vector<double> sample_gem(double alpha, double theta, int n_atoms, RngStream& rng) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ParameterError("sample_gem: alpha must lie in [0,1)");
  if (!(theta > 0.0)) throw ParameterError("sample_gem: theta must be positive");
  if (n_atoms < 1) throw ParameterError("sample_gem: n_atoms must be positive");
  std::vector<double> p(n_atoms);
  double rest = 1.0;
  for (int i = 1; i <= n_atoms; ++i) {
    const double m = sample_beta(1.0 - alpha, theta + i * alpha, rng);
    p[i - 1] = m * rest;
    rest *= 1.0 - m;
  }
  return p;
}

DirichletIdentity parse_dirichlet_identity(const std::string& name) {
  if (name == "aggregation") return DirichletIdentity::aggregation;
  if (name == "decimation") return DirichletIdentity::decimation;
  if (name == "size_bias") return DirichletIdentity::size_bias;
  if (name == "marginal") return DirichletIdentity::marginal;
  if (name == "deletion") return DirichletIdentity::deletion;
  throw ParameterError("unknown Dirichlet identity: " + name);
}

std::string to_string(DirichletIdentity kind) {
  switch (kind) {
    case DirichletIdentity::aggregation: return "aggregation";
    case DirichletIdentity::decimation: return "decimation";
    case DirichletIdentity::size_bias: return "size_bias";
    case DirichletIdentity::marginal: return "marginal";
    case DirichletIdentity::deletion: return "deletion";
  }
  return "?";
}

namespace {

using Sample = std::vector<std::vector<double>>;  // [coordinate][draw]

std::vector<TestReport> compare_coordinates(const Sample& x, const Sample& y) {
  std::vector<TestReport> out;
  for (std::size_t c = 0; c < x.size(); ++c) {
    out.push_back(ks_two_sample(x[c], y[c]));
    out.back().name = "coordinate " + std::to_string(c);
  }
  return out;
}

Sample draw_target(const std::vector<double>& theta, int n, RngStream& rng) {
  Sample s(theta.size(), std::vector<double>(n));
  for (int t = 0; t < n; ++t) {
    const auto d = sample_dirichlet(theta, rng);
    for (std::size_t c = 0; c < theta.size(); ++c) s[c][t] = d[c];
  }
  return s;
}

}  // namespace

std::vector<TestReport> dirichlet_identity_checks(DirichletIdentity kind, const IdentityParams& params,
                                                  int n_samples, RngStream& rng) {
  const auto& th = params.theta;
  const int k = static_cast<int>(th.size());
  require(n_samples >= 50, "check_dirichlet_identity: n_samples must be at least 50");
  require(k >= 2, "check_dirichlet_identity: need at least two coordinates");
  for (double t : th) require(t > 0.0, "check_dirichlet_identity: parameters must be positive");
  const int i = params.i, j = params.j;
  require(i >= 0 && i < k, "check_dirichlet_identity: index i out of range");

  std::vector<TestReport> parts;
  switch (kind) {
    case DirichletIdentity::aggregation: {
      require(j >= 0 && j < k && i < j, "aggregation: need i < j");
      std::vector<double> target;
      for (int c = 0; c < k; ++c) {
        if (c == j) continue;
        target.push_back(c == i ? th[i] + th[j] : th[c]);
      }
      Sample x(target.size(), std::vector<double>(n_samples));
      for (int t = 0; t < n_samples; ++t) {
        const auto d = sample_dirichlet(th, rng);
        int o = 0;
        for (int c = 0; c < k; ++c) {
          if (c == j) continue;
          x[o++][t] = c == i ? d[i] + d[j] : d[c];
        }
      }
      parts = compare_coordinates(x, draw_target(target, n_samples, rng));
      break;
    }
    case DirichletIdentity::decimation: {
      const auto& a = params.split;
      require(a.size() == 3, "decimation: split needs three weights");
      require(std::abs(a[0] + a[1] + a[2] - 1.0) < 1e-12, "decimation: split must sum to 1");
      std::vector<double> target, inner;
      for (int c = 0; c < k; ++c) {
        if (c != i) {
          target.push_back(th[c]);
          continue;
        }
        for (double w : a) {
          require(w > 0.0 && w < 1.0, "decimation: split weights must lie in (0,1)");
          target.push_back(w * th[i]);
          inner.push_back(w * th[i]);
        }
      }
      Sample x(target.size(), std::vector<double>(n_samples));
      for (int t = 0; t < n_samples; ++t) {
        const auto d = sample_dirichlet(th, rng);
        const auto p = sample_dirichlet(inner, rng);
        int o = 0;
        for (int c = 0; c < k; ++c) {
          if (c != i) {
            x[o++][t] = d[c];
            continue;
          }
          for (int q = 0; q < 3; ++q) x[o++][t] = p[q] * d[i];
        }
      }
      parts = compare_coordinates(x, draw_target(target, n_samples, rng));
      break;
    }
    case DirichletIdentity::size_bias: {
      // Keep draws whose size-biased index equals i; compare moments with
      // Dirichlet(theta + e_i).
      std::vector<double> target = th;
      target[i] += 1.0;
      double t0 = 0.0;
      for (double t : target) t0 += t;
      Sample kept(k);
      int accepted = 0;
      long guard = 0;
      while (accepted < n_samples) {
        if (++guard > 1000L * n_samples) throw ResourceError("size_bias: acceptance too rare");
        const auto d = sample_dirichlet(th, rng);
        double u = rng.uniform(), acc = 0.0;
        int idx = k - 1;
        for (int c = 0; c < k; ++c) {
          acc += d[c];
          if (u < acc) {
            idx = c;
            break;
          }
        }
        if (idx != i) continue;
        for (int c = 0; c < k; ++c) kept[c].push_back(d[c]);
        ++accepted;
      }
      for (int c = 0; c < k; ++c) {
        const double a = target[c];
        const double m1 = a / t0;
        const double m2 = a * (a + 1) / (t0 * (t0 + 1));
        const double m4 = m2 * (a + 2) * (a + 3) / ((t0 + 2) * (t0 + 3));
        std::vector<double> sq(kept[c].size());
        for (std::size_t q = 0; q < sq.size(); ++q) sq[q] = kept[c][q] * kept[c][q];
        parts.push_back(moment_z_test(kept[c], m1, m2 - m1 * m1));
        parts.back().name = "coordinate " + std::to_string(c) + " mean";
        parts.push_back(moment_z_test(sq, m2, m4 - m2 * m2));
        parts.back().name = "coordinate " + std::to_string(c) + " second moment";
      }
      break;
    }
    case DirichletIdentity::marginal: {
      require(j >= 0 && j < k && i != j, "marginal: need i != j");
      Sample x(1, std::vector<double>(n_samples)), y(1, std::vector<double>(n_samples));
      for (int t = 0; t < n_samples; ++t) {
        const auto d = sample_dirichlet(th, rng);
        x[0][t] = d[i] / (d[i] + d[j]);
      }
      for (int t = 0; t < n_samples; ++t) y[0][t] = sample_beta(th[i], th[j], rng);
      parts = compare_coordinates(x, y);
      break;
    }
    case DirichletIdentity::deletion: {
      std::vector<double> target;
      for (int c = 0; c < k; ++c)
        if (c != i) target.push_back(th[c]);
      Sample x(target.size(), std::vector<double>(n_samples));
      for (int t = 0; t < n_samples; ++t) {
        const auto d = sample_dirichlet(th, rng);
        int o = 0;
        for (int c = 0; c < k; ++c)
          if (c != i) x[o++][t] = d[c] / (1.0 - d[i]);
      }
      if (target.size() == 1) {
        // Dirichlet of one coordinate is the point mass at 1.
        TestReport r;
        r.name = "coordinate 0";
        r.passed = true;
        for (double v : x[0]) r.passed = r.passed && std::abs(v - 1.0) < 1e-9;
        r.n_samples = {n_samples};
        parts.push_back(r);
        break;
      }
      parts = compare_coordinates(x, draw_target(target, n_samples, rng));
      break;
    }
  }
  for (auto& r : parts) {
    r.name = "dirichlet_" + to_string(kind) + " " + r.name;
    r.seed = rng.master_seed();
  }
  return parts;
}

TestReport check_dirichlet_identity(DirichletIdentity kind, const IdentityParams& params,
                                    int n_samples, RngStream& rng) {
  const auto parts = dirichlet_identity_checks(kind, params, n_samples, rng);
  TestReport report;
  report.name = "dirichlet_" + to_string(kind);
  report.seed = rng.master_seed();
  report.passed = true;
  report.threshold = parts.front().threshold;
  for (const auto& r : parts) {
    report.statistic = std::max(report.statistic, r.statistic);
    if (r.p_value) report.p_value = std::min(report.p_value.value_or(1.0), *r.p_value);
    report.passed = report.passed && r.passed;
    report.n_samples = r.n_samples;
  }
  return report;
}

}  // namespace beadforge
