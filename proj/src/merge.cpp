#include "beadforge/merge.hpp"

#include <cmath>

#include <json.hpp>

#include "beadforge/errors.hpp"

namespace beadforge {

MergeTrace merge_with_cutpoints(const std::vector<StringOfBeads>& strings, const CutSequence& cuts) {
  const int k = static_cast<int>(strings.size());
  std::vector<int> next(k, 0);  // first unconsumed atom per string
  std::vector<AtomRef> all;
  all.reserve(cuts.cuts.size() + k);
  for (const auto& c : cuts.cuts) {
    if (c.string_index < 0 || c.string_index >= k) throw CutSequenceError("cut references unknown string");
    const int n_atoms = static_cast<int>(strings[c.string_index].atoms.size());
    if (c.atom_index < 0 || c.atom_index >= n_atoms) throw CutSequenceError("cut atom out of range");
    if (c.atom_index < next[c.string_index]) throw CutSequenceError("cuts out of order within a string");
    next[c.string_index] = c.atom_index + 1;
    all.push_back(c);
  }
  for (int i = 0; i < k; ++i) {
    const int n_atoms = static_cast<int>(strings[i].atoms.size());
    if (next[i] < n_atoms) all.push_back({i, n_atoms - 1});
  }

  MergeTrace t;
  std::vector<int> prev(k, -1);
  double offset = 0.0;
  for (const auto& c : all) {
    const auto& s = strings[c.string_index];
    const int from = prev[c.string_index];
    const double base = from < 0 ? 0.0 : s.atoms[from].position;
    for (int a = from + 1; a <= c.atom_index; ++a) {
      const Atom& src = s.atoms[a];
      const AtomRef ref{c.string_index, a};
      if (from < 0 && a == 0 && src.position == 0.0 && !t.output.atoms.empty()) {
        // Closed left end meets the previous cut atom: one larger atom.
        t.output.atoms.back().mass += src.mass;
        t.sources.back().push_back(ref);
        continue;
      }
      t.output.atoms.push_back({offset + (src.position - base), src.mass});
      t.sources.push_back({ref});
    }
    offset += s.atoms[c.atom_index].position - base;
    t.segments.push_back({c.string_index, from, c.atom_index});
    prev[c.string_index] = c.atom_index;
  }
  double length = 0.0, mass = 0.0;
  for (const auto& s : strings) {
    length += s.length;
    mass += s.total_mass;
  }
  t.output.length = length;
  t.output.total_mass = mass;
  return t;
}

CutSequence sample_merge_cuts(const std::vector<StringOfBeads>& strings, double alpha,
                              const std::vector<double>& thetas, RngStream& rng) {
  const std::size_t k = strings.size();
  if (k == 0 || thetas.size() != k) throw ParameterError("merge_alpha_theta: strings and thetas must match");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("merge_alpha_theta: alpha must lie in (0,1)");
  for (double th : thetas)
    if (!(th > 0.0)) throw ParameterError("merge_alpha_theta: thetas must be positive");

  std::vector<std::vector<double>> m(k), r(k);
  std::size_t total_atoms = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (const auto& a : strings[i].atoms) m[i].push_back(a.mass);
    r[i].resize(m[i].size());
    double acc = 0.0;
    for (std::size_t j = m[i].size(); j-- > 0;) {
      acc += m[i][j];
      r[i][j] = acc;
    }
    total_atoms += m[i].size();
  }
  if (total_atoms == 0) throw ParameterError("merge_alpha_theta: no atoms to merge");

  CutSequence cuts;
  std::vector<std::size_t> next(k, 0);
  std::size_t used = 0;
  while (used < total_atoms) {
    double pool = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      if (next[i] < m[i].size()) pool += r[i][next[i]];
    double x = rng.uniform() * pool;
    std::size_t pick = k;
    for (std::size_t i = 0; i < k; ++i) {
      if (next[i] >= m[i].size()) continue;
      pick = i;
      x -= r[i][next[i]];
      if (x < 0.0) break;
    }
    const std::size_t idx = coin_toss_walk(m[pick], r[pick], next[pick], alpha, thetas[pick], rng);
    cuts.cuts.push_back({static_cast<int>(pick), static_cast<int>(idx)});
    used += idx + 1 - next[pick];
    next[pick] = idx + 1;
  }
  return cuts;
}

MergeTrace merge_alpha_theta(const std::vector<StringOfBeads>& strings, double alpha,
                             const std::vector<double>& thetas, RngStream& rng) {
  return merge_with_cutpoints(strings, sample_merge_cuts(strings, alpha, thetas, rng));
}

MergeInputs build_merge_inputs(double alpha, const std::vector<double>& thetas, int crp_n,
                               RngStream& rng) {
  if (thetas.empty()) throw ParameterError("build_merge_inputs: need at least one theta");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("build_merge_inputs: alpha must lie in (0,1)");
  MergeInputs in;
  in.weights = sample_dirichlet(thetas, rng);
  for (std::size_t i = 0; i < thetas.size(); ++i)
    in.strings.push_back(rescale(beads_from_crp(run_crp(alpha, thetas[i], crp_n, rng)), in.weights[i], alpha));
  return in;
}

double first_segment_mass(const MergeTrace& trace, const std::vector<StringOfBeads>& strings) {
  if (trace.segments.empty()) return 0.0;
  const auto& seg = trace.segments.front();
  double m = 0.0;
  for (int a = seg.from_atom + 1; a <= seg.to_atom; ++a) m += strings[seg.string_index].atoms[a].mass;
  return m;
}

std::string to_json(const MergeTrace& trace) {
  nlohmann::ordered_json j;
  j["segments"] = nlohmann::ordered_json::array();
  for (const auto& s : trace.segments)
    j["segments"].push_back({{"string", s.string_index}, {"from", s.from_atom}, {"to", s.to_atom}});
  j["output"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < trace.output.atoms.size(); ++i)
    j["output"].push_back({{"atom_index", i},
                           {"position", trace.output.atoms[i].position},
                           {"mass", trace.output.atoms[i].mass}});
  j["length"] = trace.output.length;
  return j.dump();
}

}  // namespace beadforge
