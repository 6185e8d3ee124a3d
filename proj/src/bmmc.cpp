#include "beadforge/bmmc.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "beadforge/beads.hpp"
#include "beadforge/errors.hpp"
#include "beadforge/merge.hpp"
#include "beadforge/parallel.hpp"

namespace beadforge {

namespace {

struct Branches {
  std::vector<StringOfBeads> strings;     // E_1, E_2, E_3
  std::vector<std::vector<int>> vertex;   // carrier of each atom
  std::vector<char> on;                   // vertex lies on R(T, Sigma_1, Sigma~_1)
  std::vector<int> path1;                 // root .. Sigma_1
  int omega = -1;
};

std::vector<int> root_path(const RootedTree& t, int v) {
  std::vector<int> p;
  for (; v >= 0; v = t.parent[v]) p.push_back(v);
  std::reverse(p.begin(), p.end());
  return p;
}

Branches cut_branches(const RootedTree& t, const std::vector<int>& lc, int s1, int s2) {
  Branches b;
  b.path1 = root_path(t, s1);
  const auto p2 = root_path(t, s2);
  std::size_t d = 0;
  while (d + 1 < b.path1.size() && d + 1 < p2.size() && b.path1[d + 1] == p2[d + 1]) ++d;
  b.omega = b.path1[d];
  b.on.assign(t.size(), 0);
  for (int v : b.path1) b.on[v] = 1;
  for (int v : p2) b.on[v] = 1;

  b.strings.resize(3);
  b.vertex.resize(3);
  auto add = [&](int which, int v, double pos) {
    double m = 0.0;
    for (int c : t.children[v])
      if (!b.on[c]) m += lc[c];
    if (m <= 0.0) return;
    b.strings[which].atoms.push_back({pos, m});
    b.strings[which].total_mass += m;
    b.vertex[which].push_back(v);
  };
  const std::size_t d1 = b.path1.size() - 1, d2 = p2.size() - 1;
  for (std::size_t i = 0; i < d; ++i) add(0, b.path1[i], static_cast<double>(i));
  for (std::size_t i = d + 1; i < d1; ++i) add(1, b.path1[i], static_cast<double>(i - d));
  for (std::size_t i = d; i < d2; ++i) add(2, p2[i], static_cast<double>(i - d));
  b.strings[0].length = static_cast<double>(d);
  b.strings[1].length = static_cast<double>(d1 - d);
  b.strings[2].length = static_cast<double>(d2 - d);
  return b;
}

// Rebuilds the tree from the merged spine: one spine vertex per output atom
// (the root itself for an atom at position 0), side subtrees re-hung, then
// Sigma_1 at the end.
RootedTree replant(const RootedTree& t, const Branches& b, const MergeTrace& trace, int s1) {
  RootedTree out;
  const int root = out.add_vertex(-1);
  int cur = root;
  for (std::size_t i = 0; i < trace.output.atoms.size(); ++i) {
    int host = root;
    if (trace.output.atoms[i].position > 0.0) {
      host = out.add_vertex(cur);
      cur = host;
    }
    for (const auto& ref : trace.sources[i]) {
      const int v = b.vertex[ref.string_index][ref.atom_index];
      for (int c : t.children[v])
        if (!b.on[c]) copy_subtree(t, c, out, host);
    }
  }
  copy_subtree(t, s1, out, cur);
  return suppress_degree2(out);
}

RootedTree insert_leaf(const RootedTree& tree, int v) {
  RootedTree t = tree;
  const int p = t.parent[v];
  const int w = t.size();
  t.parent.push_back(p);
  t.children.push_back({v});
  t.label.push_back(0);
  std::replace(t.children[p].begin(), t.children[p].end(), v, w);
  t.parent[v] = w;
  t.add_vertex(w);
  return t;
}

std::vector<int> other_leaves(const std::vector<int>& leaves, int i, int j) {
  std::vector<int> rest;
  for (int q = 0; q < static_cast<int>(leaves.size()); ++q)
    if (q != i && q != j) rest.push_back(q);
  return rest;
}

}  // namespace

RootedTree apply_transition(const RootedTree& tree, const TransitionChoice& c) {
  if (c.edge_vertex == tree.root || c.edge_vertex < 0 || c.edge_vertex >= tree.size())
    throw ParameterError("apply_transition: bad edge");
  // States are unlabelled shapes; input labels are dropped.
  RootedTree plain = tree;
  std::fill(plain.label.begin(), plain.label.end(), 0);
  const RootedTree t = insert_leaf(plain, c.edge_vertex);
  const auto leaves = t.leaves();
  const int nl = static_cast<int>(leaves.size());
  if (c.sigma1 == c.sigma1_tilde || c.sigma1 < 0 || c.sigma1_tilde < 0 || c.sigma1 >= nl ||
      c.sigma1_tilde >= nl)
    throw ParameterError("apply_transition: bad leaf pair");
  if (static_cast<int>(c.label_order.size()) != nl - 2) throw ParameterError("apply_transition: bad label order");

  const int s1 = leaves[c.sigma1], s2 = leaves[c.sigma1_tilde];
  const auto lc = leaf_counts(t);
  const Branches b = cut_branches(t, lc, s1, s2);

  // Atom of R_2 hit by each vertex on R_2.
  std::vector<AtomRef> at(t.size(), AtomRef{-1, -1});
  for (int s = 0; s < 3; ++s)
    for (int a = 0; a < static_cast<int>(b.vertex[s].size()); ++a) at[b.vertex[s][a]] = {s, a};

  CutSequence cuts;
  std::vector<int> next(3, 0);
  for (int q : c.label_order) {
    int v = leaves[q];
    while (!b.on[v]) v = t.parent[v];
    const AtomRef y = at[v];
    if (y.string_index < 0) throw ParameterError("apply_transition: projection missed every atom");
    if (y.atom_index >= next[y.string_index]) {
      cuts.cuts.push_back(y);
      next[y.string_index] = y.atom_index + 1;
    }
  }
  const MergeTrace trace = merge_with_cutpoints(b.strings, cuts);
  return replant(t, b, trace, s1);
}

TransitionChoice sample_transition(const RootedTree& tree, RngStream& rng) {
  TransitionChoice c;
  // Uniform edge, identified by its lower endpoint.
  int e = static_cast<int>(rng.below(tree.size() - 1));
  if (e >= tree.root) ++e;
  c.edge_vertex = e;
  const int nl = tree.n_leaves() + 1;
  c.sigma1 = static_cast<int>(rng.below(nl));
  c.sigma1_tilde = static_cast<int>(rng.below(nl - 1));
  if (c.sigma1_tilde >= c.sigma1) ++c.sigma1_tilde;
  c.label_order = other_leaves(std::vector<int>(nl), c.sigma1, c.sigma1_tilde);
  for (int i = static_cast<int>(c.label_order.size()) - 1; i > 0; --i)
    std::swap(c.label_order[i], c.label_order[rng.below(i + 1)]);
  return c;
}

ChainState bmmc_discrete_step(const ChainState& state, RngStream& rng) {
  if (state.tree.n_leaves() < 2) throw ParameterError("bmmc_discrete_step: need n >= 2");
  ChainState next;
  next.tree = apply_transition(state.tree, sample_transition(state.tree, rng));
  next.step_count = state.step_count + 1;
  return next;
}

ShapeHistogram run_chain(const RootedTree& initial, std::int64_t steps, std::int64_t burn_in,
                         RngStream& rng) {
  if (burn_in < 0 || steps <= burn_in) throw ParameterError("run_chain: need steps > burn_in >= 0");
  ShapeHistogram h;
  ChainState s{initial, 0};
  for (std::int64_t i = 1; i <= steps; ++i) {
    s = bmmc_discrete_step(s, rng);
    if (i > burn_in) {
      ++h.counts[canonical_shape(s.tree)];
      ++h.total;
    }
  }
  return h;
}

std::vector<std::string> run_chain_trace(const RootedTree& initial, std::int64_t steps, RngStream& rng) {
  if (steps < 0) throw ParameterError("run_chain_trace: negative step count");
  std::vector<std::string> out;
  out.reserve(steps);
  ChainState s{initial, 0};
  for (std::int64_t i = 0; i < steps; ++i) {
    s = bmmc_discrete_step(s, rng);
    out.push_back(canonical_shape(s.tree));
  }
  return out;
}

namespace {

int state_index(const std::vector<std::string>& states, const std::string& code) {
  const auto it = std::lower_bound(states.begin(), states.end(), code);
  if (it == states.end() || *it != code) throw ParameterError("transition left the state space: " + code);
  return static_cast<int>(it - states.begin());
}

constexpr std::uint64_t kMatrixTag = 0xB3;

}  // namespace

TransitionMatrix empirical_transition_matrix(int n, std::int64_t samples_per_state,
                                             std::uint64_t seed, int jobs) {
  if (n > 6) throw ResourceError("empirical_transition_matrix: n > 6 not supported");
  if (n < 2) throw ParameterError("empirical_transition_matrix: need n >= 2");
  if (samples_per_state < 1) throw ParameterError("empirical_transition_matrix: need samples");
  TransitionMatrix m;
  m.states = enumerate_shapes(n, false);
  const int S = static_cast<int>(m.states.size());
  m.rows = replicate<std::vector<double>>(S, jobs, [&](std::size_t s) {
    RngStream rng(seed, stream_id(kMatrixTag, s));
    const RootedTree start = tree_from_shape(m.states[s]);
    std::vector<std::int64_t> counts(S, 0);
    for (std::int64_t r = 0; r < samples_per_state; ++r) {
      const RootedTree next = apply_transition(start, sample_transition(start, rng));
      ++counts[state_index(m.states, canonical_shape(next))];
    }
    std::vector<double> row(S);
    for (int j = 0; j < S; ++j) row[j] = static_cast<double>(counts[j]) / samples_per_state;
    return row;
  });
  return m;
}

TransitionMatrix exact_transition_matrix(int n) {
  if (n > 6) throw ResourceError("exact_transition_matrix: n > 6 not supported");
  if (n < 2) throw ParameterError("exact_transition_matrix: need n >= 2");
  TransitionMatrix m;
  m.states = enumerate_shapes(n, false);
  const int S = static_cast<int>(m.states.size());
  m.rows.assign(S, std::vector<double>(S, 0.0));
  for (int s = 0; s < S; ++s) {
    const RootedTree start = tree_from_shape(m.states[s]);
    std::vector<double> counts(S, 0.0);
    double total = 0.0;
    const int nl = n + 1;
    for (int e = 0; e < start.size(); ++e) {
      if (e == start.root) continue;
      for (int i = 0; i < nl; ++i)
        for (int j = 0; j < nl; ++j) {
          if (i == j) continue;
          TransitionChoice c{e, i, j, other_leaves(std::vector<int>(nl), i, j)};
          do {
            counts[state_index(m.states, canonical_shape(apply_transition(start, c)))] += 1.0;
            total += 1.0;
          } while (std::next_permutation(c.label_order.begin(), c.label_order.end()));
        }
    }
    for (int j = 0; j < S; ++j) m.rows[s][j] = counts[j] / total;
  }
  return m;
}

std::vector<double> stationary_vector(const TransitionMatrix& m) {
  const std::size_t S = m.states.size();
  std::vector<double> pi(S, 1.0 / S), nxt(S);
  for (int it = 0; it < 200000; ++it) {
    std::fill(nxt.begin(), nxt.end(), 0.0);
    for (std::size_t i = 0; i < S; ++i) {
      nxt[i] += 0.5 * pi[i];
      for (std::size_t j = 0; j < S; ++j) nxt[j] += 0.5 * pi[i] * m.rows[i][j];
    }
    double diff = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < S; ++i) sum += nxt[i];
    for (std::size_t i = 0; i < S; ++i) {
      nxt[i] /= sum;
      diff += std::abs(nxt[i] - pi[i]);
    }
    pi.swap(nxt);
    if (diff < 1e-14) break;
  }
  return pi;
}

std::vector<std::vector<int>> closed_classes(const TransitionMatrix& m) {
  const int S = static_cast<int>(m.states.size());
  std::vector<std::vector<char>> reach(S, std::vector<char>(S, 0));
  for (int i = 0; i < S; ++i) {
    reach[i][i] = 1;
    for (int j = 0; j < S; ++j)
      if (m.rows[i][j] > 0.0) reach[i][j] = 1;
  }
  for (int k = 0; k < S; ++k)
    for (int i = 0; i < S; ++i)
      if (reach[i][k])
        for (int j = 0; j < S; ++j)
          if (reach[k][j]) reach[i][j] = 1;
  std::vector<std::vector<int>> out;
  std::vector<char> seen(S, 0);
  for (int i = 0; i < S; ++i) {
    if (seen[i]) continue;
    std::vector<int> cls;
    for (int j = 0; j < S; ++j)
      if (reach[i][j] && reach[j][i]) cls.push_back(j);
    for (int j : cls) seen[j] = 1;
    bool closed = true;
    for (int j : cls)
      for (int k = 0; k < S; ++k)
        if (reach[j][k] && !std::binary_search(cls.begin(), cls.end(), k)) closed = false;
    if (closed) out.push_back(cls);
  }
  return out;
}

namespace {

std::array<double, 3> fresh_two_leaf_split(const RootedTree& t, RngStream& rng) {
  const auto leaves = t.leaves();
  const auto a = rng.below(leaves.size());
  auto b = rng.below(leaves.size() - 1);
  if (b >= a) ++b;
  const ReducedTree r = reduce(t, {t.label[leaves[a]], t.label[leaves[b]]});
  // Skeleton: root -> branch point -> two leaves.
  std::array<double, 3> out{};
  const int bp = r.skeleton.children[0][0];
  out[0] = r.vertex_mass[0] + r.edge_mass(bp);
  for (int c : r.skeleton.children[bp]) {
    const bool is_a = r.tree_vertex[c] == leaves[a];
    out[is_a ? 1 : 2] += r.edge_mass(c);
  }
  return out;
}

std::array<double, 3> top3(std::vector<double> m, double total) {
  std::array<double, 3> out{};
  const std::size_t c = std::min<std::size_t>(3, m.size());
  std::partial_sort(m.begin(), m.begin() + c, m.end(), std::greater<>());
  for (std::size_t i = 0; i < c; ++i) out[i] = m[i] / total;
  return out;
}

}  // namespace

ContinuumStepResult bmmc_continuum_step(const RootedTree& proxy, RngStream& rng) {
  const int n = proxy.n_leaves();
  if (n < 100) throw ParameterError("bmmc_continuum_step: proxy too small");
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const auto leaves = proxy.leaves();
  const auto lc = leaf_counts(proxy);

  ContinuumStepResult res;
  res.before.branch_masses = fresh_two_leaf_split(proxy, rng);

  const auto i = rng.below(leaves.size());
  auto j = rng.below(leaves.size() - 1);
  if (j >= i) ++j;
  const int s1 = leaves[i], s2 = leaves[j];
  const Branches b = cut_branches(proxy, lc, s1, s2);

  // Spine [[rho, Sigma_1]] before the move.
  std::vector<double> spine;
  for (std::size_t k = 0; k + 1 < b.path1.size(); ++k) {
    double m = 0.0;
    for (int c : proxy.children[b.path1[k]])
      if (c != b.path1[k + 1]) m += lc[c];
    if (m > 0.0) spine.push_back(m);
  }
  res.before.top_atoms = top3(spine, n - 1.0);
  res.before.spine_length = (b.path1.size() - 1) * scale;

  const MergeTrace trace =
      merge_alpha_theta(b.strings, 0.5, {0.5, 0.5, 0.5}, rng);
  res.after_tree = replant(proxy, b, trace, s1);
  std::vector<double> merged;
  for (const auto& a : trace.output.atoms) merged.push_back(a.mass);
  res.after.top_atoms = top3(merged, trace.output.total_mass);
  res.after.spine_length = trace.output.length * scale;
  res.after.branch_masses = fresh_two_leaf_split(res.after_tree, rng);
  res.after_total_mass = res.after.branch_masses[0] + res.after.branch_masses[1] + res.after.branch_masses[2];
  return res;
}

std::string to_json(const TransitionMatrix& m) {
  nlohmann::ordered_json j;
  j["states"] = m.states;
  j["rows"] = m.rows;
  return j.dump();
}

std::string to_json(const ShapeHistogram& h) {
  nlohmann::ordered_json j;
  j["total"] = h.total;
  j["counts"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : h.counts) j["counts"][k] = v;
  return j.dump();
}

}  // namespace beadforge
