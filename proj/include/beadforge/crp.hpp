#pragma once

#include <string>
#include <vector>

#include "beadforge/rng.hpp"

namespace beadforge {

struct CrpTable {
  int size = 0;
  int birth_rank = 0;
};

// Ordered (alpha, theta) restaurant: tables in left-to-right (spinal) order.
struct OrderedCrpState {
  double alpha = 0.5;
  double theta = 0.5;
  int n_customers = 0;
  std::vector<CrpTable> tables;

  int n_tables() const { return static_cast<int>(tables.size()); }
};

struct Composition {
  std::vector<int> parts;
  int n = 0;
};

// Empty restaurant; the first crp_step opens table 1.
OrderedCrpState empty_crp(double alpha, double theta);

// One customer arrives: joins table i w.p. (n_i - alpha)/(n + theta), otherwise
// opens a table placed at the far right w.p. theta/(k alpha + theta) or left of
// any existing table w.p. alpha/(k alpha + theta). Linear in the table count.
OrderedCrpState crp_step(OrderedCrpState state, RngStream& rng);

// n customers via an indexed sampler (expected O(1) per customer).
// theta = 0 is accepted when alpha > 0, for (alpha, 0) strings.
OrderedCrpState run_crp(double alpha, double theta, int n, RngStream& rng);

double partition_probability(double alpha, double theta, const std::vector<int>& block_sizes);
double log_partition_probability(double alpha, double theta, const std::vector<int>& block_sizes);

// rising(x, m) = x (x+1) ... (x+m-1); rising(x, 0) = 1.
double rising(double x, int m);

Composition composition(const OrderedCrpState& state);

// {0, n_1/n, (n_1+n_2)/n, ..., 1}
std::vector<double> regenerative_set(const OrderedCrpState& state);
std::vector<double> regenerative_set(const Composition& c);

// Phi(s) = s Gamma(s+theta) Gamma(1-alpha) / Gamma(s+theta+1-alpha)
double laplace_exponent(double alpha, double theta, double s);

std::string to_json(const OrderedCrpState& state);

}  // namespace beadforge
