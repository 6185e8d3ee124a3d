#include "beadforge/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>

#include <json.hpp>

#include "beadforge/beads.hpp"
#include "beadforge/bmmc.hpp"
#include "beadforge/crp.hpp"
#include "beadforge/distributions.hpp"
#include "beadforge/errors.hpp"
#include "beadforge/io.hpp"
#include "beadforge/embed.hpp"
#include "beadforge/merge.hpp"
#include "beadforge/parallel.hpp"
#include "beadforge/reference.hpp"
#include "beadforge/trees.hpp"

namespace beadforge {

bool criterion_passes(const std::vector<Check>& checks) {
  int stat = 0, stat_ok = 0;
  for (const auto& c : checks) {
    if (c.exact && !c.report.passed) return false;
    if (!c.exact) {
      ++stat;
      stat_ok += c.report.passed;
    }
  }
  return stat == 0 || stat_ok >= kStatisticalPassFraction * stat;
}

namespace {

std::string pname(double a, double t) {
  return "(" + fmt_num(a) + "," + fmt_num(t) + ")";
}

class Runner {
 public:
  Runner(const AcceptanceConfig& c, int id, std::string title) : cfg_(c) {
    res_.id = id;
    res_.title = std::move(title);
  }

  // Replicate r of experiment `tag` draws from stream (seed, stream_id(id.tag, r)).
  template <class R, class F>
  std::vector<R> run(std::uint64_t tag, std::size_t count, F&& f) {
    const std::uint64_t t = (static_cast<std::uint64_t>(res_.id) << 8) | tag;
    return replicate<R>(count, cfg_.jobs, [&](std::size_t r) {
      RngStream rng(cfg_.seed, stream_id(t, r));
      return f(rng, r);
    });
  }

  RngStream stream(std::uint64_t tag) {
    return RngStream(cfg_.seed, stream_id((static_cast<std::uint64_t>(res_.id) << 8) | tag, 0xFFFFFFFFFFULL));
  }

  void stat(TestReport r, const std::string& name) {
    r.name = name;
    r.seed = cfg_.seed;
    res_.checks.push_back({std::move(r), false});
  }

  void exact(const std::string& name, bool ok, double statistic = 0.0, double threshold = 0.0) {
    TestReport r;
    r.name = name;
    r.statistic = statistic;
    r.threshold = threshold;
    r.passed = ok;
    r.seed = cfg_.seed;
    res_.checks.push_back({std::move(r), true});
  }

  CriterionResult finish() {
    res_.passed = criterion_passes(res_.checks);
    return std::move(res_);
  }

  const AcceptanceConfig& cfg_;

 private:
  CriterionResult res_;
};

// First and second moment tests of coordinate samples against Dirichlet(a).
void dirichlet_moments(Runner& run, const std::string& prefix, const std::vector<std::vector<double>>& coords,
                       const std::vector<double>& a) {
  double s = 0.0;
  for (double x : a) s += x;
  auto raw = [&](double ai, int k) { return rising(ai, k) / rising(s, k); };
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double m1 = raw(a[i], 1), m2 = raw(a[i], 2), m4 = raw(a[i], 4);
    std::vector<double> sq(coords[i].size());
    for (std::size_t r = 0; r < sq.size(); ++r) sq[r] = coords[i][r] * coords[i][r];
    run.stat(moment_z_test(coords[i], m1, m2 - m1 * m1), prefix + " coord " + std::to_string(i) + " mean");
    run.stat(moment_z_test(sq, m2, m4 - m2 * m2), prefix + " coord " + std::to_string(i) + " second moment");
  }
}

std::vector<std::vector<double>> columns(const std::vector<std::vector<double>>& rows) {
  std::vector<std::vector<double>> c(rows.empty() ? 0 : rows[0].size());
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) c[i].push_back(r[i]);
  return c;
}

// Ranked masses (largest, second) of independent (alpha, theta)-strings.
std::vector<std::vector<double>> string_oracle(Runner& run, std::uint64_t tag, double alpha, double theta,
                                               std::size_t reps, int customers) {
  return columns(run.run<std::vector<double>>(tag, reps, [&](RngStream& rng, std::size_t) {
    return ranked_masses(beads_from_crp(run_crp(alpha, theta, customers, rng)), 2);
  }));
}

CriterionResult c1(const AcceptanceConfig& cfg) {
  Runner run(cfg, 1, "co-seating law");
  const std::vector<std::pair<double, double>> params{{0.3, 0.7}, {0.5, 0.5}, {0.5, 1.5}};
  for (std::size_t k = 0; k < params.size(); ++k) {
    const auto [a, t] = params[k];
    const auto x = run.run<double>(k, 100000, [&](RngStream& rng, std::size_t) {
      return run_crp(a, t, 2, rng).tables.size() == 1 ? 1.0 : 0.0;
    });
    const double p = (1 - a) / (1 + t);
    run.stat(moment_z_test(x, p, p * (1 - p)), "P(1,2 share) " + pname(a, t));
  }
  return run.finish();
}

CriterionResult c2(const AcceptanceConfig& cfg) {
  Runner run(cfg, 2, "partition-probability normalization");
  const std::vector<std::pair<double, double>> params{{0.3, 0.7}, {0.5, 0.5}, {0.5, 1.5}, {0.0, 1.0}, {0.8, 0.2}, {0.5, 0.0}};
  for (const auto& [a, t] : params) {
    double worst = 0.0;
    for (int n = 1; n <= 5; ++n) {
      double s = 0.0;
      for (const auto& b : reference::set_partitions(n)) s += partition_probability(a, t, b);
      worst = std::max(worst, std::abs(s - 1.0));
    }
    run.exact("sum over partitions of [n], n<=5, " + pname(a, t), worst <= 1e-10, worst, 1e-10);
  }
  return run.finish();
}

CriterionResult c3(const AcceptanceConfig& cfg) {
  Runner run(cfg, 3, "coin-tossing split");
  const std::vector<std::pair<double, double>> params{{0.5, 0.5}, {0.5, 1.5}, {0.3, 0.7}};
  for (std::size_t k = 0; k < params.size(); ++k) {
    const auto [a, t] = params[k];
    const auto rows = run.run<std::vector<double>>(k, 10000, [&](RngStream& rng, std::size_t) {
      const StringOfBeads s = beads_from_crp(run_crp(a, t, 10000, rng));
      const MassSplit m = coin_toss_sample(s, a, t, rng).second;
      return std::vector<double>{m.before, m.atom, m.after};
    });
    dirichlet_moments(run, "split " + pname(a, t), columns(rows), {a, 1 - a, t});
  }
  return run.finish();
}

CriterionResult c4(const AcceptanceConfig& cfg) {
  Runner run(cfg, 4, "merging strings of beads");
  struct Setting {
    std::vector<double> thetas;
  };
  const double a = 0.5;
  const std::vector<Setting> settings{{{0.5, 0.5, 0.5}}, {{0.5, 1.5}}};
  const int customers = 10000;
  const std::size_t reps = 10000;
  for (std::size_t k = 0; k < settings.size(); ++k) {
    const auto& th = settings[k].thetas;
    double tsum = 0.0;
    std::string tn;
    for (double t : th) {
      tsum += t;
      tn += (tn.empty() ? "" : ",") + fmt_num(t);
    }
    const std::string label = "(" + fmt_num(a) + ";" + tn + ")";
    const auto rows = run.run<std::vector<double>>(2 * k, reps, [&](RngStream& rng, std::size_t) {
      const MergeInputs in = build_merge_inputs(a, th, customers, rng);
      const MergeTrace tr = merge_alpha_theta(in.strings, a, th, rng);
      const auto top = ranked_masses(tr.output, 2);
      return std::vector<double>{first_segment_mass(tr, in.strings), top[0], top[1],
                                 match_probability(tr.output)};
    });
    const auto col = columns(rows);
    run.stat(ks_one_sample_beta(col[0], 1.0, tsum), label + " first segment vs Beta(1," + fmt_num(tsum) + ")");
    const auto oracle = string_oracle(run, 2 * k + 1, a, tsum, reps, customers);
    run.stat(ks_two_sample(col[1], oracle[0]), label + " largest atom vs " + pname(a, tsum) + "-string");
    run.stat(ks_two_sample(col[2], oracle[1]), label + " second atom vs " + pname(a, tsum) + "-string");
    const double p = (1 - a) / (1 + tsum);
    run.stat(moment_z_test(col[3], p, variance(col[3])), label + " match probability");
  }
  return run.finish();
}

CriterionResult c5(const AcceptanceConfig& cfg) {
  Runner run(cfg, 5, "Dirichlet identities");
  const std::vector<DirichletIdentity> kinds{DirichletIdentity::aggregation, DirichletIdentity::decimation,
                                             DirichletIdentity::size_bias, DirichletIdentity::marginal,
                                             DirichletIdentity::deletion};
  IdentityParams p;
  p.theta = {0.5, 1.5, 2.0, 0.7};
  p.i = 0;
  p.j = 2;
  p.split = {0.2, 0.3, 0.5};
  const auto reports = run.run<std::vector<TestReport>>(0, kinds.size(), [&](RngStream& rng, std::size_t k) {
    return dirichlet_identity_checks(kinds[k], p, 10000, rng);
  });
  for (const auto& parts : reports)
    for (const auto& r : parts) run.stat(r, r.name);
  return run.finish();
}

CriterionResult c6(const AcceptanceConfig& cfg) {
  Runner run(cfg, 6, "growth-process exactness");
  const double a = 0.5, t = 1.5;
  const int n = 4;
  const auto law = reference::growth_distribution(a, t, n);
  const auto comp_law = reference::ordered_crp_compositions(a, t, n - 1);
  struct Obs {
    std::string shape;
    std::vector<int> comp;
  };
  const auto obs = run.run<Obs>(0, 100000, [&](RngStream& rng, std::size_t) {
    const RootedTree tr = grow_alpha_theta(a, t, n, rng);
    return Obs{labelled_shape(tr), spinal_composition(tr).parts};
  });
  std::vector<std::int64_t> counts(law.size(), 0), ccounts(comp_law.size(), 0);
  std::vector<double> probs, cprobs;
  std::int64_t outside = 0;
  for (const auto& [k, p] : law) probs.push_back(p);
  for (const auto& [k, p] : comp_law) cprobs.push_back(p);
  for (const auto& o : obs) {
    const auto it = law.find(o.shape);
    const auto ct = comp_law.find(o.comp);
    if (it == law.end() || ct == comp_law.end()) {
      ++outside;
      continue;
    }
    ++counts[std::distance(law.begin(), it)];
    ++ccounts[std::distance(comp_law.begin(), ct)];
  }
  run.exact("every sampled shape lies in the enumerated support", outside == 0, static_cast<double>(outside));
  run.stat(chi_square_gof(counts, probs), "labelled shapes of grow(0.5,1.5,4) vs enumeration");
  run.stat(chi_square_gof(ccounts, cprobs), "spinal compositions vs ordered CRP");
  return run.finish();
}

bool cherry(const RootedTree& t, int a, int b) {
  return t.parent[leaf_with_label(t, a)] == t.parent[leaf_with_label(t, b)];
}

CriterionResult c7(const AcceptanceConfig& cfg) {
  Runner run(cfg, 7, "exchangeability dichotomy");
  const int n = 4;
  const std::size_t reps = 100000;
  const std::vector<double> thetas{0.5, 1.5};
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    const double t = thetas[k];
    const auto x = run.run<std::array<double, 2>>(k, 2 * reps, [&](RngStream& rng, std::size_t) {
      const RootedTree tr = grow_alpha_theta(0.5, t, n, rng);
      return std::array<double, 2>{cherry(tr, 1, 2) ? 1.0 : 0.0, cherry(tr, 3, 4) ? 1.0 : 0.0};
    });
    // Disjoint halves give independent samples of the two indicators.
    std::vector<double> c12, c34;
    for (std::size_t r = 0; r < reps; ++r) c12.push_back(x[r][0]);
    for (std::size_t r = reps; r < 2 * reps; ++r) c34.push_back(x[r][1]);
    TestReport z = two_sample_mean_test(c12, c34);
    if (k == 0) {
      run.stat(z, "cherry {1,2} vs {3,4} equal at (0.5,0.5)");
    } else {
      z.threshold = 5.0;
      z.passed = z.statistic > 5.0;
      run.stat(z, "cherry {1,2} vs {3,4} gap > 5 SE at (0.5,1.5)");
    }
    // Exact law: invariant under relabelling iff theta = 1/2.
    const auto law = reference::growth_distribution(0.5, t, n);
    double worst = 0.0;
    std::vector<int> perm{1, 2, 3, 4};
    do {
      std::map<std::string, double> moved;
      for (const auto& [code, p] : law) {
        RootedTree tr = tree_from_shape(code);
        for (auto& l : tr.label)
          if (l > 0) l = perm[l - 1];
        moved[labelled_shape(tr)] += p;
      }
      for (const auto& [code, p] : law) {
        const auto it = moved.find(code);
        worst = std::max(worst, std::abs(p - (it == moved.end() ? 0.0 : it->second)));
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (k == 0)
      run.exact("enumerated law permutation invariant at (0.5,0.5)", worst <= 1e-12, worst, 1e-12);
    else
      run.exact("enumerated law not permutation invariant at (0.5,1.5)", worst > 1e-3, worst, 1e-3);
  }
  return run.finish();
}

CriterionResult c8(const AcceptanceConfig& cfg) {
  Runner run(cfg, 8, "discrete branch merging chain");
  const std::vector<int> expected{1, 1, 2, 3};
  for (int n = 2; n <= 5; ++n) {
    const std::string sn = "n=" + std::to_string(n);
    const auto all = enumerate_shapes(n, false);
    const auto bin = enumerate_shapes(n, true);
    run.exact(sn + " binary shape count", static_cast<int>(bin.size()) == expected[n - 2],
              static_cast<double>(bin.size()), expected[n - 2]);

    // Closed classes of the exact transition matrix.
    const TransitionMatrix exact = exact_transition_matrix(n);
    const auto cls = closed_classes(exact);
    std::vector<std::string> closed;
    if (cls.size() == 1)
      for (int i : cls[0]) closed.push_back(exact.states[i]);
    run.exact(sn + " unique closed class equals the binary shapes", closed == bin,
              static_cast<double>(cls.size()), 1.0);

    // (b) binary shapes closed along 10^5 steps from every binary start.
    const auto bad = run.run<std::int64_t>(16 + n, bin.size(), [&](RngStream& rng, std::size_t s) {
      ChainState st{tree_from_shape(bin[s]), 0};
      std::int64_t b = 0;
      for (int i = 0; i < 100000; ++i) {
        st = bmmc_discrete_step(st, rng);
        b += !is_binary(st.tree) || st.tree.n_leaves() != n;
      }
      return b;
    });
    std::int64_t nb = 0;
    for (auto b : bad) nb += b;
    run.exact(sn + " no non-binary state in 1e5 steps from binary starts", nb == 0, static_cast<double>(nb));

    // (c) every non-binary start reaches a binary shape within 10^4 steps.
    std::vector<std::string> nonbin;
    for (const auto& s : all)
      if (!std::binary_search(bin.begin(), bin.end(), s)) nonbin.push_back(s);
    const auto hit = run.run<int>(32 + n, nonbin.size() * 100, [&](RngStream& rng, std::size_t r) {
      ChainState st{tree_from_shape(nonbin[r / 100]), 0};
      for (int i = 0; i < 10000; ++i) {
        if (is_binary(st.tree)) return 1;
        st = bmmc_discrete_step(st, rng);
      }
      return is_binary(st.tree) ? 1 : 0;
    });
    int reached = 0;
    for (int h : hit) reached += h;
    run.exact(sn + " binary shape reached in all trials from non-binary starts",
              reached == static_cast<int>(hit.size()), reached, static_cast<double>(hit.size()));

    // (d) stationary law: matrix power iteration vs a long chain.
    const TransitionMatrix emp = empirical_transition_matrix(n, 100000, cfg.seed ^ (0xD0ULL + n), cfg.jobs);
    const auto pi = stationary_vector(emp);
    RngStream rng = run.stream(48 + n);
    const ShapeHistogram h = run_chain(tree_from_shape(bin[0]), 1000000 + 1000, 1000, rng);
    std::vector<double> q(all.size(), 0.0);
    for (std::size_t i = 0; i < all.size(); ++i) {
      const auto it = h.counts.find(all[i]);
      if (it != h.counts.end()) q[i] = static_cast<double>(it->second) / h.total;
    }
    TestReport tv;
    tv.statistic = tv_distance(pi, q);
    tv.threshold = 0.05;
    tv.passed = tv.statistic < 0.05;
    tv.n_samples = {100000, h.total};
    run.stat(tv, sn + " TV(power iteration, chain histogram)");

    if (n == 2) {
      const auto y_at = std::find(exact.states.begin(), exact.states.end(), canonical_shape(make_y_tree()));
      const auto yi = static_cast<std::size_t>(y_at - exact.states.begin());
      const bool point = y_at != exact.states.end() && exact.rows[yi][yi] == 1.0;
      RngStream r2 = run.stream(64);
      const ShapeHistogram y = run_chain(make_y_tree(), 10000, 0, r2);
      run.exact("n=2 Y-tree absorbing: exact row is a point mass", point);
      run.exact("n=2 Y-tree absorbing: 1e4 simulated steps", y.counts.size() == 1 && y.total == 10000);
    }
  }
  return run.finish();
}

CriterionResult c9(const AcceptanceConfig& cfg) {
  Runner run(cfg, 9, "continuum branch merging invariance proxy");
  const int n = 10000;
  const std::size_t reps = 1000;
  const auto rows = run.run<std::vector<double>>(0, reps, [&](RngStream& rng, std::size_t) {
    const RootedTree proxy = grow_alpha_theta(0.5, 0.5, n, rng);
    const ContinuumStepResult r = bmmc_continuum_step(proxy, rng);
    std::vector<double> v;
    for (double x : r.before.branch_masses) v.push_back(x);
    for (double x : r.after.branch_masses) v.push_back(x);
    v.push_back(r.before.top_atoms[0]);
    v.push_back(r.before.top_atoms[1]);
    v.push_back(r.after.top_atoms[0]);
    v.push_back(r.after.top_atoms[1]);
    v.push_back(r.after_total_mass);
    return v;
  });
  const auto col = columns(rows);
  double worst = 0.0;
  for (double m : col[10]) worst = std::max(worst, std::abs(m - 1.0));
  run.exact("after-step total mass = 1", worst <= 1e-9, worst, 1e-9);
  dirichlet_moments(run, "before 2-leaf split", {col[0], col[1], col[2]}, {0.5, 0.5, 0.5});
  dirichlet_moments(run, "after 2-leaf split", {col[3], col[4], col[5]}, {0.5, 0.5, 0.5});
  const auto o1 = string_oracle(run, 1, 0.5, 0.5, 10000, n);
  const auto o2 = string_oracle(run, 2, 0.5, 1.5, 10000, n);
  run.stat(ks_two_sample(col[6], o1[0]), "before spine largest atom vs (0.5,0.5)-string");
  run.stat(ks_two_sample(col[7], o1[1]), "before spine second atom vs (0.5,0.5)-string");
  run.stat(ks_two_sample(col[8], o2[0]), "merged spine largest atom vs (0.5,1.5)-string");
  run.stat(ks_two_sample(col[9], o2[1]), "merged spine second atom vs (0.5,1.5)-string");
  return run.finish();
}

CriterionResult c10(const AcceptanceConfig& cfg) {
  Runner run(cfg, 10, "branch merging on Ford CRTs");
  const int n = 10000;
  const std::size_t reps = 4000;
  const std::vector<double> alphas{0.3, 0.5};
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    const double a = alphas[k];
    const auto rows = run.run<std::vector<double>>(2 * k, reps, [&](RngStream& rng, std::size_t) {
      auto proxy = std::make_shared<const RootedTree>(grow_alpha_theta(a, 1 - a, n, rng));
      const StartConfig c = ford_start_config(proxy, a, rng);
      const auto m = c.masses();
      const BeadSpace s = merge_spine(c, partition_cutpoints(c, a, 64, rng));
      std::vector<double> masses;
      for (const auto& b : s.branches[0].beads) masses.push_back(b.mass);
      std::partial_sort(masses.begin(), masses.begin() + std::min<std::size_t>(2, masses.size()), masses.end(),
                        std::greater<>());
      masses.resize(2, 0.0);
      return std::vector<double>{m[0], m[1], m[2], m[3], m[4], masses[0], masses[1]};
    });
    const auto col = columns(rows);
    dirichlet_moments(run, "start config alpha=" + fmt_num(a), {col[0], col[1], col[2], col[3], col[4]},
                      {a, 1 - a, a, 1 - a, 1 - a});
    const auto o = string_oracle(run, 2 * k + 1, a, 2 - a, reps, n);
    run.stat(ks_two_sample(col[5], o[0]), "merged spine largest atom vs " + pname(a, 2 - a) + "-string");
    run.stat(ks_two_sample(col[6], o[1]), "merged spine second atom vs " + pname(a, 2 - a) + "-string");
  }
  return run.finish();
}

CriterionResult c11(const AcceptanceConfig& cfg) {
  Runner run(cfg, 11, "recursive embedding");
  const int n = 10000;
  const std::size_t reps = 2000;
  const double a = 0.5;
  const auto emb = columns(run.run<std::vector<double>>(0, reps, [&](RngStream& rng, std::size_t) {
    auto proxy = std::make_shared<const RootedTree>(grow_alpha_theta(a, 1 - a, n, rng));
    const auto spaces = recursive_embed(proxy, a, 2, 64, rng);
    const auto s = two_leaf_summary(spaces.back());
    return std::vector<double>(s.begin(), s.end());
  }));
  const auto ora = columns(run.run<std::vector<double>>(1, reps, [&](RngStream& rng, std::size_t) {
    const RootedTree t = grow_alpha_theta(a, 2 - a, n, rng);
    const ReducedTree r = reduce(t, {1, 2});
    const int bp = r.skeleton.children[0][0];
    double m1 = 0.0, m2 = 0.0;
    for (int c : r.skeleton.children[bp]) (r.skeleton.label[c] == 1 ? m1 : m2) += r.edge_mass(c);
    return std::vector<double>{r.total_length() * std::pow(n, -a), r.vertex_mass[0] + r.edge_mass(bp), m1, m2};
  }));
  const char* names[] = {"total length", "root edge mass", "leaf 1 edge mass", "leaf 2 edge mass"};
  for (int i = 0; i < 4; ++i) run.stat(ks_two_sample(emb[i], ora[i]), std::string(names[i]) + " vs grow(0.5,1.5)");
  return run.finish();
}

CriterionResult c12(const AcceptanceConfig& cfg) {
  Runner run(cfg, 12, "density identities");
  for (const auto& [a, t] : std::vector<std::pair<double, double>>{{0.5, 1.5}, {0.3, 0.7}}) {
    double worst = 0.0;
    for (int i = 1; i <= 99; ++i) {
      const double u = 0.5 + 0.005 * i;
      const Densities d = densities(a, t, u);
      worst = std::max(worst, std::abs(d.f_o - d.f_star) / std::max(1.0, std::abs(d.f_o)));
    }
    run.exact("f_o = u f(u) + (1-u) f(1-u) on 99 points " + pname(a, t), worst <= 1e-10, worst, 1e-10);
  }
  double w0 = 0.0;
  for (const auto& [a, t] : std::vector<std::pair<double, double>>{{0.3, 0.7}, {0.5, 0.5}, {0.5, 1.5}, {0.8, 0.2}})
    w0 = std::max(w0, std::abs(laplace_exponent(a, t, 0.0)));
  run.exact("Phi(0) = 0", w0 <= 1e-12, w0, 1e-12);
  const double d1 = std::abs(laplace_exponent(0.5, 0.5, 1.0) - std::numbers::pi / 2);
  run.exact("Phi_{0.5,0.5}(1) = pi/2", d1 <= 1e-12, d1, 1e-12);
  return run.finish();
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& cfg) {
  const std::vector<std::function<CriterionResult(const AcceptanceConfig&)>> all{
      c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12};
  std::vector<int> ids = cfg.criteria;
  if (ids.empty())
    for (int i = 1; i <= 12; ++i) ids.push_back(i);
  std::vector<CriterionResult> out;
  for (int id : ids) {
    if (id < 1 || id > 12) throw ParameterError("run_acceptance: unknown criterion " + std::to_string(id));
    out.push_back(all[id - 1](cfg));
  }
  return out;
}

std::string acceptance_report(const std::vector<CriterionResult>& results) {
  std::string out;
  for (const auto& r : results) {
    int stat = 0, stat_ok = 0, ex = 0, ex_ok = 0;
    for (const auto& c : r.checks) {
      auto j = nlohmann::ordered_json::parse(to_json_line(c.report));
      nlohmann::ordered_json line;
      line["criterion"] = r.id;
      line["kind"] = c.exact ? "exact" : "statistical";
      for (auto it = j.begin(); it != j.end(); ++it) line[it.key()] = it.value();
      out += line.dump() + "\n";
      (c.exact ? ex : stat) += 1;
      (c.exact ? ex_ok : stat_ok) += c.report.passed;
    }
    nlohmann::ordered_json s;
    s["criterion"] = r.id;
    s["title"] = r.title;
    s["passed"] = r.passed;
    s["exact_passed"] = ex_ok;
    s["exact_total"] = ex;
    s["statistical_passed"] = stat_ok;
    s["statistical_total"] = stat;
    out += s.dump() + "\n";
  }
  return out;
}

std::string summary_line(const CriterionResult& r) {
  int stat = 0, stat_ok = 0, ex = 0, ex_ok = 0;
  for (const auto& c : r.checks) {
    (c.exact ? ex : stat) += 1;
    (c.exact ? ex_ok : stat_ok) += c.report.passed;
  }
  return "criterion " + std::to_string(r.id) + (r.passed ? " PASS  " : " FAIL  ") + r.title + "  (" +
         std::to_string(stat_ok) + "/" + std::to_string(stat) + " statistical, " + std::to_string(ex_ok) + "/" +
         std::to_string(ex) + " exact)";
}

}  // namespace beadforge
