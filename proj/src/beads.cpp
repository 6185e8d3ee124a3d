#include "beadforge/beads.hpp"

#include <algorithm>
#include <cmath>

#include "beadforge/distributions.hpp"
#include "beadforge/errors.hpp"
#include "beadforge/io.hpp"

namespace beadforge {

void validate(const StringOfBeads& s) {
  double sum = 0.0;
  double prev = -1.0;
  for (const auto& a : s.atoms) {
    if (!(a.mass > 0.0)) throw ParameterError("string of beads: atom mass must be positive");
    if (!(a.position >= 0.0)) throw ParameterError("string of beads: negative position");
    if (!(a.position > prev)) throw ParameterError("string of beads: positions must increase");
    prev = a.position;
    sum += a.mass;
  }
  if (!s.atoms.empty() && s.atoms.back().position > s.length * (1 + 1e-12) + 1e-12)
    throw ParameterError("string of beads: atom beyond length");
  if (std::abs(sum - s.total_mass) > 1e-9) throw ParameterError("string of beads: total mass mismatch");
}

StringOfBeads beads_from_crp(const OrderedCrpState& state) {
  StringOfBeads s;
  const double step = std::pow(static_cast<double>(state.n_customers), -state.alpha);
  s.atoms.reserve(state.tables.size());
  for (std::size_t j = 0; j < state.tables.size(); ++j)
    s.atoms.push_back({(j + 1) * step, static_cast<double>(state.tables[j].size) / state.n_customers});
  s.length = state.tables.size() * step;
  s.total_mass = 1.0;
  return s;
}

double switching_probability(double u, double alpha, double theta) {
  const double on = (1.0 - u) * theta;
  const double denom = on + u * alpha;
  return denom > 0.0 ? on / denom : 1.0;
}

std::size_t coin_toss_walk(const std::vector<double>& masses, const std::vector<double>& suffix,
                           std::size_t first, double alpha, double theta, RngStream& rng) {
  const std::size_t last = masses.size() - 1;
  for (std::size_t i = first; i < last; ++i) {
    const double r = suffix[i];
    const double u = (r - masses[i]) / r;
    if (rng.uniform() < switching_probability(u, alpha, theta)) return i;
  }
  return last;
}

namespace {

void check_coin(double alpha, double theta) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("coin toss: alpha must lie in (0,1)");
  if (!(theta > 0.0)) throw ParameterError("coin toss: theta must be positive");
}

std::vector<double> suffix_sums(const std::vector<double>& m) {
  std::vector<double> r(m.size());
  double acc = 0.0;
  for (std::size_t i = m.size(); i-- > 0;) {
    acc += m[i];
    r[i] = acc;
  }
  return r;
}

std::vector<double> masses_of(const StringOfBeads& s) {
  std::vector<double> m(s.atoms.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = s.atoms[i].mass;
  return m;
}

}  // namespace

std::pair<std::size_t, MassSplit> coin_toss_sample(const StringOfBeads& beads, double alpha,
                                                   double theta, RngStream& rng) {
  if (beads.atoms.empty()) throw ParameterError("coin_toss_sample: empty string");
  check_coin(alpha, theta);
  const auto m = masses_of(beads);
  const auto r = suffix_sums(m);
  const std::size_t idx = coin_toss_walk(m, r, 0, alpha, theta, rng);
  MassSplit split;
  split.atom = m[idx];
  split.after = idx + 1 < m.size() ? r[idx + 1] : 0.0;
  for (std::size_t i = 0; i < idx; ++i) split.before += m[i];
  return {idx, split};
}

std::vector<double> coin_toss_probabilities(const StringOfBeads& beads, double alpha, double theta) {
  if (beads.atoms.empty()) throw ParameterError("coin_toss_probabilities: empty string");
  check_coin(alpha, theta);
  const auto m = masses_of(beads);
  const auto r = suffix_sums(m);
  std::vector<double> p(m.size());
  double alive = 1.0;
  for (std::size_t i = 0; i + 1 < m.size(); ++i) {
    const double q = switching_probability((r[i] - m[i]) / r[i], alpha, theta);
    p[i] = alive * q;
    alive *= 1.0 - q;
  }
  p.back() = alive;
  return p;
}

StringOfBeads rescale(const StringOfBeads& s, double w, double alpha) {
  StringOfBeads out = s;
  const double lw = std::pow(w, alpha);
  for (auto& a : out.atoms) {
    a.position *= lw;
    a.mass *= w;
  }
  out.length *= lw;
  out.total_mass *= w;
  return out;
}

SplitResult split_at(const StringOfBeads& beads, std::size_t index, double alpha) {
  if (index >= beads.atoms.size()) throw ParameterError("split_at: index out of range");
  SplitResult out;
  const Atom& cut = beads.atoms[index];
  for (std::size_t i = 0; i < index; ++i) out.split.before += beads.atoms[i].mass;
  for (std::size_t i = index + 1; i < beads.atoms.size(); ++i) out.split.after += beads.atoms[i].mass;
  out.split.atom = cut.mass;
  out.atom_mass = cut.mass;

  if (index == 0) {
    out.prefix.empty = true;
  } else {
    const double g = out.split.before;
    const double ls = std::pow(g, -alpha);
    for (std::size_t i = 0; i < index; ++i)
      out.prefix.atoms.push_back({beads.atoms[i].position * ls, beads.atoms[i].mass / g});
    out.prefix.length = cut.position * ls;
    out.prefix.total_mass = 1.0;
  }

  if (index + 1 == beads.atoms.size()) {
    out.suffix.empty = true;
  } else {
    const double h = out.split.after;
    const double ls = std::pow(h, -alpha);
    for (std::size_t i = index + 1; i < beads.atoms.size(); ++i)
      out.suffix.atoms.push_back({(beads.atoms[i].position - cut.position) * ls, beads.atoms[i].mass / h});
    out.suffix.length = (beads.length - cut.position) * ls;
    out.suffix.total_mass = 1.0;
  }
  return out;
}

StringOfBeads concat_beads(double G, double D, const StringOfBeads& left,
                           const StringOfBeads& right, double alpha) {
  if (!(G > 0.0 && G < D && D < 1.0)) throw ParameterError("concat_beads: need 0 < G < D < 1");
  StringOfBeads out;
  const double lg = std::pow(G, alpha);
  const double ld = std::pow(1.0 - D, alpha);
  for (const auto& a : left.atoms) out.atoms.push_back({a.position * lg, a.mass * G});
  const double mid = lg * left.length;
  out.atoms.push_back({mid, D - G});
  for (const auto& a : right.atoms) out.atoms.push_back({mid + a.position * ld, a.mass * (1.0 - D)});
  out.length = mid + ld * right.length;
  out.total_mass = 0.0;
  for (const auto& a : out.atoms) out.total_mass += a.mass;
  return out;
}

StickBreakingBeads beads_via_stick_breaking(double alpha, double theta, int n_sticks, int crp_n,
                                            RngStream& rng) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("stick breaking: alpha must lie in (0,1)");
  if (!(theta > 0.0)) throw ParameterError("stick breaking: theta must be positive");
  if (n_sticks < 1 || crp_n < 1) throw ParameterError("stick breaking: sizes must be positive");
  StickBreakingBeads out;
  double rest = 1.0;
  double offset = 0.0;
  for (int i = 0; i < n_sticks; ++i) {
    const double y = sample_beta(1.0, theta, rng);
    const double w = y * rest;
    rest *= 1.0 - y;
    out.stick_masses.push_back(w);
    const StringOfBeads piece = rescale(beads_from_crp(run_crp(alpha, 0.0, crp_n, rng)), w, alpha);
    for (const auto& a : piece.atoms) out.beads.atoms.push_back({offset + a.position, a.mass});
    offset += piece.length;
    out.beads.total_mass += piece.total_mass;
  }
  out.beads.length = offset;
  out.residual_mass = rest;
  return out;
}

double largest_mass(const StringOfBeads& s) {
  double m = 0.0;
  for (const auto& a : s.atoms) m = std::max(m, a.mass);
  return m;
}

std::vector<double> ranked_masses(const StringOfBeads& s, std::size_t count) {
  std::vector<double> m;
  m.reserve(s.atoms.size());
  for (const auto& a : s.atoms) m.push_back(a.mass);
  const std::size_t c = std::min(count, m.size());
  std::partial_sort(m.begin(), m.begin() + c, m.end(), std::greater<>());
  m.resize(count, 0.0);
  return m;
}

double match_probability(const StringOfBeads& s) {
  double sq = 0.0;
  for (const auto& a : s.atoms) sq += a.mass * a.mass;
  return sq / (s.total_mass * s.total_mass);
}

std::string to_csv(const StringOfBeads& s) {
  std::string out = "atom_index,position,mass\n";
  for (std::size_t i = 0; i < s.atoms.size(); ++i)
    out += std::to_string(i) + "," + fmt_num(s.atoms[i].position) + "," + fmt_num(s.atoms[i].mass) + "\n";
  return out;
}

}  // namespace beadforge
