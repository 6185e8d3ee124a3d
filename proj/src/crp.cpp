#include "beadforge/crp.hpp"

#include <cmath>

#include <json.hpp>

#include "beadforge/errors.hpp"

namespace beadforge {

namespace {

void check_params(double alpha, double theta, bool allow_zero_theta) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ParameterError("crp: alpha must lie in [0,1)");
  if (allow_zero_theta) {
    if (!(theta >= 0.0) || (theta == 0.0 && alpha == 0.0))
      throw ParameterError("crp: need theta > 0, or theta = 0 with alpha > 0");
  } else if (!(theta > 0.0)) {
    throw ParameterError("crp: theta must be positive");
  }
}

// Slot among k+1 gaps: far right with weight theta, any other gap with weight alpha.
int insertion_slot(int k, double alpha, double theta, RngStream& rng) {
  if (k == 0) return 0;
  const double x = rng.uniform() * (k * alpha + theta);
  if (x < k * alpha) {
    const int slot = static_cast<int>(x / alpha);
    return slot < k ? slot : k - 1;
  }
  return k;
}

}  // namespace

OrderedCrpState empty_crp(double alpha, double theta) {
  check_params(alpha, theta, true);
  OrderedCrpState s;
  s.alpha = alpha;
  s.theta = theta;
  return s;
}

OrderedCrpState crp_step(OrderedCrpState s, RngStream& rng) {
  const int k = s.n_tables();
  const double n = s.n_customers;
  const double p_new = k == 0 ? 1.0 : (k * s.alpha + s.theta) / (n + s.theta);
  if (rng.uniform() < p_new) {
    const int slot = insertion_slot(k, s.alpha, s.theta, rng);
    s.tables.insert(s.tables.begin() + slot, CrpTable{1, k + 1});
  } else {
    // Table weights n_i - alpha, total n - k alpha.
    double x = rng.uniform() * (n - k * s.alpha);
    int pick = k - 1;
    for (int i = 0; i < k; ++i) {
      x -= s.tables[i].size - s.alpha;
      if (x < 0.0) {
        pick = i;
        break;
      }
    }
    ++s.tables[pick].size;
  }
  ++s.n_customers;
  return s;
}

OrderedCrpState run_crp(double alpha, double theta, int n, RngStream& rng) {
  check_params(alpha, theta, true);
  if (n < 1) throw ParameterError("run_crp: n must be positive");

  std::vector<int> size_by_birth;      // table sizes, birth order
  std::vector<int> table_of;           // customer -> table (birth index)
  std::vector<int> order;              // spinal order of birth indices
  table_of.reserve(n);

  for (int c = 0; c < n; ++c) {
    const int k = static_cast<int>(size_by_birth.size());
    const double p_new = k == 0 ? 1.0 : (k * alpha + theta) / (c + theta);
    if (rng.uniform() < p_new) {
      const int slot = insertion_slot(k, alpha, theta, rng);
      order.insert(order.begin() + slot, k);
      size_by_birth.push_back(1);
      table_of.push_back(k);
      continue;
    }
    // Pick a customer uniformly (table w.p. n_i / n), keep it w.p. (n_i - alpha)/n_i.
    for (;;) {
      const int t = table_of[rng.below(static_cast<std::uint64_t>(c))];
      const int sz = size_by_birth[t];
      if (alpha == 0.0 || rng.uniform() * sz < sz - alpha) {
        ++size_by_birth[t];
        table_of.push_back(t);
        break;
      }
    }
  }

  OrderedCrpState s;
  s.alpha = alpha;
  s.theta = theta;
  s.n_customers = n;
  s.tables.reserve(order.size());
  for (int b : order) s.tables.push_back(CrpTable{size_by_birth[b], b + 1});
  return s;
}

double rising(double x, int m) {
  double r = 1.0;
  for (int j = 0; j < m; ++j) r *= x + j;
  return r;
}

double log_partition_probability(double alpha, double theta, const std::vector<int>& blocks) {
  if (blocks.empty()) throw ParameterError("partition_probability: empty block list");
  const int k = static_cast<int>(blocks.size());
  int n = 0;
  double lp = 0.0;
  for (int i = 1; i < k; ++i) lp += std::log(theta + alpha * i);
  for (int b : blocks) {
    if (b < 1) throw ParameterError("partition_probability: block sizes must be positive");
    n += b;
    lp += std::lgamma(b - alpha) - std::lgamma(1.0 - alpha);
  }
  lp -= std::lgamma(n + theta) - std::lgamma(1.0 + theta);
  return lp;
}

double partition_probability(double alpha, double theta, const std::vector<int>& blocks) {
  if (blocks.empty()) throw ParameterError("partition_probability: empty block list");
  int n = 0;
  for (int b : blocks) {
    if (b < 1) throw ParameterError("partition_probability: block sizes must be positive");
    n += b;
  }
  if (n > 100) return std::exp(log_partition_probability(alpha, theta, blocks));
  const int k = static_cast<int>(blocks.size());
  double p = 1.0;
  for (int i = 1; i < k; ++i) p *= theta + alpha * i;
  for (int b : blocks) p *= rising(1.0 - alpha, b - 1);
  return p / rising(1.0 + theta, n - 1);
}

Composition composition(const OrderedCrpState& state) {
  Composition c;
  c.n = state.n_customers;
  for (const auto& t : state.tables) c.parts.push_back(t.size);
  return c;
}

std::vector<double> regenerative_set(const Composition& c) {
  std::vector<double> out{0.0};
  long acc = 0;
  for (std::size_t i = 0; i < c.parts.size(); ++i) {
    acc += c.parts[i];
    out.push_back(i + 1 == c.parts.size() ? 1.0 : static_cast<double>(acc) / c.n);
  }
  return out;
}

std::vector<double> regenerative_set(const OrderedCrpState& state) {
  return regenerative_set(composition(state));
}

double laplace_exponent(double alpha, double theta, double s) {
  if (!(s >= 0.0)) throw DomainError("laplace_exponent: s must be non-negative");
  if (s == 0.0) return 0.0;
  return s * std::exp(std::lgamma(s + theta) + std::lgamma(1.0 - alpha) -
                      std::lgamma(s + theta + 1.0 - alpha));
}

std::string to_json(const OrderedCrpState& state) {
  nlohmann::ordered_json j;
  j["alpha"] = state.alpha;
  j["theta"] = state.theta;
  j["n"] = state.n_customers;
  j["tables"] = nlohmann::ordered_json::array();
  for (const auto& t : state.tables) j["tables"].push_back({{"size", t.size}, {"birth_rank", t.birth_rank}});
  return j.dump();
}

}  // namespace beadforge
