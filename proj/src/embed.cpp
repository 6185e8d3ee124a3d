#include "beadforge/embed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <json.hpp>

#include "beadforge/errors.hpp"
#include "beadforge/io.hpp"

namespace beadforge {

double BeadSpace::total_mass() const {
  double m = 0.0;
  for (const auto& b : branches)
    for (const auto& x : b.beads) m += x.mass;
  return m;
}

double BeadSpace::total_length() const {
  double l = 0.0;
  for (const auto& b : branches) l += b.length;
  return l;
}

void validate(const BeadSpace& s) {
  std::vector<int> seen;
  for (std::size_t i = 0; i < s.branches.size(); ++i) {
    const auto& b = s.branches[i];
    if (i > 0 && (b.parent_branch < 0 || b.parent_branch >= static_cast<int>(i)))
      throw ParameterError("bead space: bad parent branch");
    double last = 0.0;
    for (const auto& x : b.beads) {
      if (!(x.mass > 0.0)) throw ParameterError("bead space: non-positive bead mass");
      if (x.position < last || x.position > b.length + 1e-12)
        throw ParameterError("bead space: bead positions out of order");
      last = x.position;
      seen.insert(seen.end(), x.labels.begin(), x.labels.end());
    }
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
    throw ParameterError("bead space: label sets overlap");
  if (seen != s.outstanding) throw ParameterError("bead space: label sets do not cover the outstanding labels");
}

std::array<double, 5> StartConfig::masses() const {
  return {branches[0].total_mass, branches[1].total_mass, branches[2].total_mass,
          branches[3].total_mass, rho_theta_mass};
}

namespace {

std::vector<int> root_path(const RootedTree& t, int v) {
  std::vector<int> p;
  for (; v >= 0; v = t.parent[v]) p.push_back(v);
  std::reverse(p.begin(), p.end());
  return p;
}

std::size_t lca_depth(const std::vector<int>& a, const std::vector<int>& b) {
  std::size_t d = 0;
  while (d + 1 < a.size() && d + 1 < b.size() && a[d + 1] == b[d + 1]) ++d;
  return d;
}

// Planted copy of a bead: a fresh root carrying the bead's subtrees.
std::shared_ptr<const RootedTree> materialize(const BeadHandle& h) {
  auto t = std::make_shared<RootedTree>();
  t->add_vertex(-1);
  for (int c : h.roots) copy_subtree(*h.tree, c, *t, 0);
  return t;
}

std::array<int, 3> smallest_labels(const RootedTree& t) {
  std::vector<std::pair<int, int>> lv;
  for (int v : t.leaves())
    if (t.label[v] > 0) lv.push_back({t.label[v], v});
  if (lv.size() < 3) throw ParameterError("start config: fewer than three labelled leaves");
  std::partial_sort(lv.begin(), lv.begin() + 3, lv.end());
  return {lv[0].second, lv[1].second, lv[2].second};
}

}  // namespace

StartConfig start_config_from_leaves(std::shared_ptr<const RootedTree> tp, std::array<int, 3> lv,
                                     double mass, double scale) {
  const RootedTree& t = *tp;
  if (lv[0] == lv[1] || lv[0] == lv[2] || lv[1] == lv[2]) throw ParameterError("start config: leaves coincide");
  std::array<std::vector<int>, 3> p;
  for (int i = 0; i < 3; ++i) {
    if (!t.is_leaf(lv[i])) throw ParameterError("start config: not a leaf");
    p[i] = root_path(t, lv[i]);
  }
  // The pair with the deeper branch point holds Sigma~_1 and Theta.
  const std::array<std::array<int, 2>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
  std::array<std::size_t, 3> d;
  for (int k = 0; k < 3; ++k) d[k] = lca_depth(p[pairs[k][0]], p[pairs[k][1]]);
  int deep = 0;
  for (int k = 1; k < 3; ++k)
    if (d[k] > d[deep]) deep = k;
  for (int k = 0; k < 3; ++k)
    if (k != deep && d[k] == d[deep]) throw DomainError("start config: coincident branch points");
  const int a = pairs[deep][0], b = pairs[deep][1], s = 3 - a - b;

  StartConfig c;
  c.tree = tp;
  c.sigma1 = lv[s];
  c.sigma1_tilde = lv[a];
  c.theta_leaf = lv[b];
  const auto& p1 = p[s];
  const auto& p2 = p[a];
  const std::size_t d_omega = lca_depth(p1, p2), d_rho = d[deep];
  const std::size_t d1 = p1.size() - 1, d2 = p2.size() - 1;
  c.omega = p1[d_omega];
  c.rho_theta = p2[d_rho];

  std::vector<char> on(t.size(), 0);
  for (int v : p1) on[v] = 1;
  for (int v : p2) on[v] = 1;
  const auto lc = leaf_counts(t);
  const int n = lc[t.root];
  if (n < 3) throw ParameterError("start config: need three leaves");
  const double unit = mass / (n - 2);

  auto handle = [&](int v, int& leaves_out) {
    BeadHandle h;
    h.tree = tp;
    h.vertex = v;
    h.length_scale = scale;
    leaves_out = 0;
    for (int ch : t.children[v])
      if (!on[ch]) {
        h.roots.push_back(ch);
        leaves_out += lc[ch];
      }
    h.n_leaves = leaves_out;
    return h;
  };
  {
    int k = 0;
    handle(c.omega, k);
    if (k > 0) throw DomainError("start config: branch point carries mass");
  }
  auto add = [&](int br, int v, double pos) {
    int k = 0;
    BeadHandle h = handle(v, k);
    if (k == 0) return;
    c.branches[br].atoms.push_back({pos * scale, k * unit});
    c.branches[br].total_mass += k * unit;
    c.handles[br].push_back(std::move(h));
  };
  for (std::size_t i = 0; i < d_omega; ++i) add(0, p1[i], static_cast<double>(i));
  for (std::size_t i = d_omega + 1; i < d1; ++i) add(1, p1[i], static_cast<double>(i - d_omega));
  for (std::size_t i = d_omega + 1; i < d_rho; ++i) add(2, p2[i], static_cast<double>(i - d_omega));
  for (std::size_t i = d_rho + 1; i < d2; ++i) add(3, p2[i], static_cast<double>(i - d_rho));
  c.branches[0].length = d_omega * scale;
  c.branches[1].length = (d1 - d_omega) * scale;
  c.branches[2].length = (d_rho - d_omega) * scale;
  c.branches[3].length = (d2 - d_rho) * scale;
  int k = 0;
  c.rho_theta_handle = handle(c.rho_theta, k);
  c.rho_theta_mass = k * unit;
  return c;
}

StartConfig brownian_start_config(std::shared_ptr<const RootedTree> proxy, RngStream& rng) {
  const auto leaves = proxy->leaves();
  const std::size_t n = leaves.size();
  if (n < 3) throw ParameterError("brownian_start_config: need at least 3 leaves");
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (;;) {
    std::array<int, 3> lv;
    for (int i = 0; i < 3; ++i) lv[i] = leaves[rng.below(n)];
    if (lv[0] == lv[1] || lv[0] == lv[2] || lv[1] == lv[2]) continue;
    try {
      return start_config_from_leaves(proxy, lv, 1.0, scale);
    } catch (const DomainError&) {
    }
  }
}

StartConfig ford_start_config(std::shared_ptr<const RootedTree> proxy, double alpha, RngStream&) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("ford_start_config: alpha must lie in (0,1)");
  const int n = proxy->n_leaves();
  if (n < 3) throw ParameterError("ford_start_config: need at least 3 leaves");
  const std::array<int, 3> lv{leaf_with_label(*proxy, 1), leaf_with_label(*proxy, 2),
                              leaf_with_label(*proxy, 3)};
  return start_config_from_leaves(proxy, lv, 1.0, std::pow(static_cast<double>(n), -alpha));
}

Partition partition_labels(const StartConfig& c, double alpha, const std::vector<int>& labels,
                           RngStream& rng) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("partition_cutpoints: alpha must lie in (0,1)");
  Partition p;
  p.labels = labels;
  if (labels.empty()) return p;
  p.y.push_back({4, 0});

  std::array<std::vector<double>, 4> m, suf;
  for (int b = 0; b < 4; ++b) {
    for (const auto& a : c.branches[b].atoms) m[b].push_back(a.mass);
    suf[b].assign(m[b].size() + 1, 0.0);
    for (std::size_t i = m[b].size(); i-- > 0;) suf[b][i] = suf[b][i + 1] + m[b][i];
  }
  const double total = suf[0][0] + suf[1][0] + suf[2][0] + suf[3][0] + c.rho_theta_mass;
  std::array<int, 4> furthest{-1, -1, -1, -1};

  // Atom of branch b in [lo, hi) with probability proportional to mass.
  auto proportional = [&](int b, std::size_t lo, std::size_t hi) {
    double u = rng.uniform() * (suf[b][lo] - suf[b][hi]);
    for (std::size_t i = lo; i + 1 < hi; ++i) {
      if (u < m[b][i]) return static_cast<int>(i);
      u -= m[b][i];
    }
    return static_cast<int>(hi - 1);
  };

  for (std::size_t k = 1; k < labels.size(); ++k) {
    double u = rng.uniform() * total;
    int b = 0;
    while (b < 4 && u >= suf[b][0]) u -= suf[b++][0];
    AtomLoc y{b, 0};
    if (b == 1 || b == 3) {
      const std::size_t top = furthest[b] + 1;
      const double top_mass = suf[b][top];
      if (rng.uniform() * suf[b][0] < top_mass)
        y.atom = static_cast<int>(coin_toss_walk(m[b], suf[b], top, alpha, 1.0 - alpha, rng));
      else
        y.atom = proportional(b, 0, top);
      furthest[b] = std::max(furthest[b], y.atom);
    } else if (b < 4) {
      y.atom = proportional(b, 0, m[b].size());
    }
    p.y.push_back(y);
  }

  std::array<int, 3> next{0, 0, 0};
  for (std::size_t k = 1; k < p.y.size(); ++k) {
    const AtomLoc& y = p.y[k];
    if (y.branch < 1 || y.branch > 3) continue;
    const int s = y.branch - 1;
    if (y.atom >= next[s]) {
      p.cuts.cuts.push_back({s, y.atom});
      next[s] = y.atom + 1;
    }
  }
  return p;
}

Partition partition_cutpoints(const StartConfig& c, double alpha, int label_budget, RngStream& rng) {
  if (label_budget < 2) throw ParameterError("partition_cutpoints: label budget must be >= 2");
  std::vector<int> labels;
  for (int k = 2; k <= label_budget; ++k) labels.push_back(k);
  return partition_labels(c, alpha, labels, rng);
}

namespace {

// Beads of one merged spine (E_0, rho_Theta, merged rest), positions from its base.
BeadBranch spine_branch(const StartConfig& c, const Partition& p) {
  std::map<std::pair<int, int>, std::vector<int>> sets;
  for (std::size_t k = 0; k < p.y.size(); ++k) sets[{p.y[k].branch, p.y[k].atom}].push_back(p.labels[k]);
  auto labels_at = [&](int b, int a) {
    auto it = sets.find({b, a});
    return it == sets.end() ? std::vector<int>{} : it->second;
  };

  BeadBranch br;
  for (std::size_t i = 0; i < c.branches[0].atoms.size(); ++i) {
    const auto& a = c.branches[0].atoms[i];
    br.beads.push_back({a.position, a.mass, c.handles[0][i], labels_at(0, static_cast<int>(i))});
  }
  const double base = c.branches[0].length;
  if (c.rho_theta_mass > 0.0)
    br.beads.push_back({base, c.rho_theta_mass, c.rho_theta_handle, labels_at(4, 0)});

  const std::vector<StringOfBeads> strings{c.branches[1], c.branches[2], c.branches[3]};
  const MergeTrace trace = merge_with_cutpoints(strings, p.cuts);
  for (std::size_t i = 0; i < trace.output.atoms.size(); ++i) {
    if (trace.sources[i].size() != 1) throw CutSequenceError("merge_spine: unexpected fused atom");
    const AtomRef r = trace.sources[i][0];
    br.beads.push_back({base + trace.output.atoms[i].position, trace.output.atoms[i].mass,
                        c.handles[r.string_index + 1][r.atom_index],
                        labels_at(r.string_index + 1, r.atom_index)});
  }
  br.length = base + trace.output.length;
  return br;
}

}  // namespace

BeadSpace merge_spine(const StartConfig& c, const Partition& p) {
  BeadSpace s;
  s.branches.push_back(spine_branch(c, p));
  s.rho_theta_position = c.branches[0].length;
  s.outstanding = p.labels;
  std::sort(s.outstanding.begin(), s.outstanding.end());
  validate(s);
  return s;
}

std::vector<BeadSpace> recursive_embed(std::shared_ptr<const RootedTree> proxy, double alpha, int K,
                                       int label_budget, RngStream& rng, const EmbedOptions& opt) {
  if (K < 1) throw ParameterError("recursive_embed: K must be >= 1");
  if (label_budget < K + 2) throw ParameterError("recursive_embed: label budget must be >= K + 2");
  if (opt.resolution_floor < 3) throw ParameterError("recursive_embed: resolution floor must be >= 3");
  const int regrow = opt.regrow_leaves > 0 ? opt.regrow_leaves : proxy->n_leaves();
  if (regrow < opt.resolution_floor) throw ParameterError("recursive_embed: regrowth size below the floor");

  std::vector<BeadSpace> out;
  const StartConfig c0 = ford_start_config(proxy, alpha, rng);
  out.push_back(merge_spine(c0, partition_cutpoints(c0, alpha, label_budget, rng)));

  for (int k = 1; k < K; ++k) {
    const BeadSpace& prev = out.back();
    const int want = k + 1;
    int bi = -1, xi = -1;
    for (std::size_t i = 0; i < prev.branches.size() && bi < 0; ++i)
      for (std::size_t j = 0; j < prev.branches[i].beads.size(); ++j) {
        const auto& l = prev.branches[i].beads[j].labels;
        if (std::find(l.begin(), l.end(), want) != l.end()) {
          bi = static_cast<int>(i);
          xi = static_cast<int>(j);
          break;
        }
      }
    if (bi < 0) throw ResourceError("recursive_embed: label " + std::to_string(want) + " not found");
    const LabelledBead& x = prev.branches[bi].beads[xi];

    // Bead tree at the original resolution, or a fresh copy when too coarse.
    std::shared_ptr<const RootedTree> sub;
    double scale = x.subtree.length_scale;
    if (x.subtree.n_leaves >= opt.resolution_floor) {
      sub = materialize(x.subtree);
    } else {
      sub = std::make_shared<const RootedTree>(grow_alpha_theta(alpha, 1.0 - alpha, regrow, rng));
      scale = std::pow(x.mass / regrow, alpha);
    }
    const StartConfig c = start_config_from_leaves(sub, smallest_labels(*sub), x.mass, scale);
    std::vector<int> labels = x.labels;
    std::sort(labels.begin(), labels.end());
    labels.erase(labels.begin());
    BeadBranch nb = spine_branch(c, partition_labels(c, alpha, labels, rng));
    nb.parent_branch = bi;
    nb.attach_position = x.position;
    nb.leaf_label = want;

    BeadSpace next = prev;
    next.branches[bi].beads.erase(next.branches[bi].beads.begin() + xi);
    next.outstanding.erase(std::find(next.outstanding.begin(), next.outstanding.end(), want));
    double nm = 0.0;
    for (const auto& b : nb.beads) nm += b.mass;
    if (std::abs(nm - x.mass) > 1e-9 * std::max(1.0, x.mass))
      throw DomainError("recursive_embed: bead mass not conserved");
    next.branches.push_back(std::move(nb));
    validate(next);

    // Projection back onto R~_k: drop the new branch and restore the bead.
    for (std::size_t i = 0; i < prev.branches.size(); ++i) {
      const auto& a = prev.branches[i].beads;
      const auto& b = next.branches[i].beads;
      const std::size_t skip = i == static_cast<std::size_t>(bi) ? 1 : 0;
      bool same = a.size() == b.size() + skip && prev.branches[i].length == next.branches[i].length;
      for (std::size_t j = 0, q = 0; same && j < a.size(); ++j) {
        if (skip && static_cast<int>(j) == xi) continue;
        same = a[j].position == b[q].position && a[j].mass == b[q].mass;
        ++q;
      }
      if (!same) throw DomainError("recursive_embed: projection consistency violated");
    }
    out.push_back(std::move(next));
  }
  return out;
}

std::array<double, 4> two_leaf_summary(const BeadSpace& s) {
  if (s.branches.size() < 2) throw ParameterError("two_leaf_summary: need two branches");
  const double at = s.branches[1].attach_position;
  std::array<double, 4> out{s.branches[0].length + s.branches[1].length, 0.0, 0.0, 0.0};
  for (const auto& b : s.branches[0].beads) out[b.position < at ? 1 : 2] += b.mass;
  for (const auto& b : s.branches[1].beads) out[3] += b.mass;
  return out;
}

double dislocation_four_term(double a, double t, double u) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("densities: u must lie in (0,1)");
  const double v = 1.0 - u;
  const double s = a * (std::pow(u, t) * std::pow(v, -a - 1.0) + std::pow(u, -a - 1.0) * std::pow(v, t)) +
                   t * (std::pow(u, t - 1.0) * std::pow(v, -a) + std::pow(u, -a) * std::pow(v, t - 1.0));
  return s / std::tgamma(1.0 - a);
}

Densities densities(double a, double t, double u) {
  if (!(a > 0.0 && a < 1.0) || !(t > 0.0)) throw ParameterError("densities: need alpha in (0,1), theta > 0");
  if (!(u > 0.0 && u < 1.0)) throw DomainError("densities: u must lie in (0,1)");
  const double g = std::tgamma(1.0 - a);
  auto f = [&](double x) {
    return (a * std::pow(1.0 - x, -a - 1.0) * std::pow(x, t - 1.0) +
            t * std::pow(x, t - 2.0) * std::pow(1.0 - x, -a)) / g;
  };
  Densities d;
  d.f = f(u);
  d.f_star = u * d.f + (1.0 - u) * f(1.0 - u);
  d.f_o = u > 0.5 ? dislocation_four_term(a, t, u) : std::numeric_limits<double>::quiet_NaN();
  return d;
}

namespace {

nlohmann::ordered_json bead_json(const LabelledBead& b) {
  nlohmann::ordered_json j;
  j["position"] = b.position;
  j["mass"] = b.mass;
  j["labels"] = b.labels;
  return j;
}

}  // namespace

std::string to_json(const BeadSpace& s) {
  nlohmann::ordered_json j;
  j["spine"] = nlohmann::ordered_json::array();
  j["prefix_branch"] = nlohmann::ordered_json::array();
  j["rho_theta"] = nullptr;
  if (!s.branches.empty()) {
    for (const auto& b : s.branches[0].beads) {
      j["spine"].push_back(bead_json(b));
      if (b.position < s.rho_theta_position) j["prefix_branch"].push_back(bead_json(b));
      if (b.position == s.rho_theta_position) j["rho_theta"] = {{"mass", b.mass}, {"labels", b.labels}};
    }
  }
  j["branches"] = nlohmann::ordered_json::array();
  for (const auto& b : s.branches) {
    nlohmann::ordered_json e;
    e["leaf"] = b.leaf_label;
    e["parent"] = b.parent_branch;
    e["attach_position"] = b.attach_position;
    e["length"] = b.length;
    e["beads"] = nlohmann::ordered_json::array();
    for (const auto& x : b.beads) e["beads"].push_back(bead_json(x));
    j["branches"].push_back(e);
  }
  j["outstanding"] = s.outstanding;
  return j.dump();
}

std::string densities_csv(double alpha, double theta, int points) {
  if (points < 1) throw ParameterError("densities_csv: need points >= 1");
  std::string out = "u,f,f_star,f_o\n";
  for (int i = 1; i <= points; ++i) {
    const double u = static_cast<double>(i) / (points + 1);
    const Densities d = densities(alpha, theta, u);
    out += fmt_num(u) + "," + fmt_num(d.f) + "," + fmt_num(d.f_star) + "," +
           (std::isnan(d.f_o) ? std::string() : fmt_num(d.f_o)) + "\n";
  }
  return out;
}

}  // namespace beadforge
