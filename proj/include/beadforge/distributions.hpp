#pragma once

#include <string>
#include <vector>

#include "beadforge/rng.hpp"
#include "beadforge/stats.hpp"

namespace beadforge {

// Point of the open simplex; weights strictly positive, summing to 1.
struct SimplexVector {
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  double operator[](std::size_t i) const { return weights[i]; }
};

// log of a Gamma(shape, 1) draw. Working in logs keeps tiny shapes finite.
double sample_log_gamma(double shape, RngStream& rng);
double sample_gamma(double shape, RngStream& rng);
double sample_beta(double a, double b, RngStream& rng);
SimplexVector sample_dirichlet(const std::vector<double>& theta, RngStream& rng);

// Birth-order proportions P_i = M_i prod_{j<i} (1 - M_j), M_i ~ Beta(1-alpha, theta+i*alpha).
std::vector<double> sample_gem(double alpha, double theta, int n_atoms, RngStream& rng);

enum class DirichletIdentity { aggregation, decimation, size_bias, marginal, deletion };

DirichletIdentity parse_dirichlet_identity(const std::string& name);
std::string to_string(DirichletIdentity kind);

// Parameters of an identity check.
//   theta: base Dirichlet parameters.
//   i, j: coordinates (0-based) used by aggregation / marginal / size_bias / deletion.
//   split: decimation weights (three entries summing to 1).
struct IdentityParams {
  std::vector<double> theta;
  int i = 0;
  int j = 1;
  std::vector<double> split;
};

// Compares the transformed sample with a directly sampled target, one report
// per coordinate (two-sample KS at 0.01, or 3 SE moment tests for size bias).
std::vector<TestReport> dirichlet_identity_checks(DirichletIdentity kind, const IdentityParams& params,
                                                  int n_samples, RngStream& rng);

// All coordinates folded into one report: passes when every part passes,
// p_value is the smallest part p-value.
TestReport check_dirichlet_identity(DirichletIdentity kind, const IdentityParams& params,
                                    int n_samples, RngStream& rng);

}  // namespace beadforge
