#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "beadforge/acceptance.hpp"
#include "beadforge/beads.hpp"
#include "beadforge/bmmc.hpp"
#include "beadforge/crp.hpp"
#include "beadforge/embed.hpp"
#include "beadforge/errors.hpp"
#include "beadforge/io.hpp"
#include "beadforge/merge.hpp"
#include "beadforge/parallel.hpp"
#include "beadforge/stats.hpp"
#include "beadforge/trees.hpp"

using namespace beadforge;

namespace {

constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

struct Common {
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::string out = "-";
  std::string format = "csv";

  std::uint64_t master_seed() const {
    if (seed) return *seed;
    if (const char* env = std::getenv("BEADFORGE_SEED")) {
      try {
        std::size_t used = 0;
        const auto v = std::stoull(env, &used);
        if (used == std::string(env).size()) return v;
      } catch (const std::exception&) {
      }
      throw ParameterError("BEADFORGE_SEED is not an unsigned integer");
    }
    return 1;
  }
};

void add_common(CLI::App* app, Common& c, bool with_format = true) {
  app->add_option("--seed", c.seed, "Master seed (falls back to BEADFORGE_SEED, then 1)");
  app->add_option("--jobs", c.jobs, "Worker threads; results do not depend on it")->check(CLI::PositiveNumber);
  app->add_option("--out", c.out, "Output file, '-' for stdout");
  if (with_format) app->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

std::string tests_json(const std::vector<TestReport>& reports) {
  std::string s;
  for (const auto& r : reports) s += to_json_line(r) + "\n";
  return s;
}

bool all_passed(const std::vector<TestReport>& reports) {
  for (const auto& r : reports)
    if (!r.passed) return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"beadforge: ordered CRPs, strings of beads, branch merging on random trees"};
  app.require_subcommand(1);

  Common common;
  double alpha = 0.5, theta = 0.5;
  std::vector<double> thetas{0.5, 0.5, 0.5};
  int n = 1000, replicates = 1, k = 2;
  std::int64_t steps = 1000, burn_in = 0;
  std::string mode;
  std::vector<int> criteria;

  auto* crp = app.add_subcommand("crp", "Ordered CRP runs and their compositions");
  crp->add_option("--alpha", alpha);
  crp->add_option("--theta", theta);
  crp->add_option("--n", n, "Customers");
  crp->add_option("--replicates", replicates);
  add_common(crp, common);

  auto* beads = app.add_subcommand("beads", "Strings of beads and coin-tossing splits");
  beads->add_option("--alpha", alpha);
  beads->add_option("--theta", theta);
  beads->add_option("--n", n, "Customers of the source CRP");
  beads->add_option("--replicates", replicates, "1: emit the string; more: coin-toss splits");
  add_common(beads, common);

  auto* merge = app.add_subcommand("merge", "Merging experiments");
  merge->add_option("--alpha", alpha);
  merge->add_option("--thetas", thetas)->delimiter(',');
  merge->add_option("--n", n, "Customers per input string");
  merge->add_option("--replicates", replicates);
  add_common(merge, common);

  auto* grow = app.add_subcommand("grow", "Tree growth and reduced trees");
  grow->add_option("--alpha", alpha);
  grow->add_option("--theta", theta);
  grow->add_option("--n", n, "Leaves");
  grow->add_option("--k", k, "Reduce to leaves 1..k (0: full tree)");
  add_common(grow, common, false);

  auto* bmmc = app.add_subcommand("bmmc", "Discrete branch merging chain");
  bmmc->add_option("--n", n, "Leaves");
  bmmc->add_option("--steps", steps);
  bmmc->add_option("--burn-in", burn_in);
  bmmc->add_option("--replicates", replicates, "Samples per state (matrix mode)");
  bmmc->add_option("--mode", mode, "trace, histogram, matrix or stationary")
      ->check(CLI::IsMember({"trace", "histogram", "matrix", "stationary"}));
  add_common(bmmc, common);

  auto* embed = app.add_subcommand("embed", "Branch merging on Ford CRTs");
  embed->add_option("--alpha", alpha);
  embed->add_option("--theta", theta, "Densities only");
  embed->add_option("--n", n, "Proxy leaves, or grid points for densities");
  embed->add_option("--k", k, "Recursion depth K");
  embed->add_option("--mode", mode, "start, spine, recursive or densities")
      ->check(CLI::IsMember({"start", "spine", "recursive", "densities"}));
  add_common(embed, common);

  auto* accept = app.add_subcommand("accept", "Acceptance suite, JSON-lines report");
  accept->add_option("--criteria", criteria, "Subset of 1..12")->delimiter(',');
  add_common(accept, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    const std::uint64_t seed = common.master_seed();
    const bool json = common.format == "json";
    require(replicates >= 1, "--replicates must be >= 1");

    if (crp->parsed()) {
      require(n >= 1, "--n must be >= 1");
      const auto states = replicate<OrderedCrpState>(replicates, common.jobs, [&](std::size_t r) {
        RngStream rng(seed, r);
        return run_crp(alpha, theta, n, rng);
      });
      std::string s = json ? "" : "replicate,table,size,birth_rank\n";
      for (std::size_t r = 0; r < states.size(); ++r) {
        if (json) {
          s += to_json(states[r]) + "\n";
          continue;
        }
        for (std::size_t j = 0; j < states[r].tables.size(); ++j)
          s += std::to_string(r) + "," + std::to_string(j) + "," + std::to_string(states[r].tables[j].size) + "," +
               std::to_string(states[r].tables[j].birth_rank) + "\n";
      }
      write_output(common.out, s);
      return 0;
    }

    if (beads->parsed()) {
      require(n >= 1, "--n must be >= 1");
      if (replicates == 1) {
        RngStream rng(seed, 0);
        const StringOfBeads b = beads_from_crp(run_crp(alpha, theta, n, rng));
        write_output(common.out, to_csv(b));
        return 0;
      }
      const auto splits = replicate<MassSplit>(replicates, common.jobs, [&](std::size_t r) {
        RngStream rng(seed, r);
        return coin_toss_sample(beads_from_crp(run_crp(alpha, theta, n, rng)), alpha, theta, rng).second;
      });
      if (!json) {
        std::string s = "replicate,before,atom,after\n";
        for (std::size_t r = 0; r < splits.size(); ++r)
          s += std::to_string(r) + "," + fmt_num(splits[r].before) + "," + fmt_num(splits[r].atom) + "," +
               fmt_num(splits[r].after) + "\n";
        write_output(common.out, s);
        return 0;
      }
      // Dirichlet(alpha, 1 - alpha, theta) means.
      const double p[3] = {alpha, 1 - alpha, theta};
      const double tot = 1 + theta;
      std::vector<TestReport> reps;
      for (int i = 0; i < 3; ++i) {
        std::vector<double> x;
        for (const auto& m : splits) x.push_back(i == 0 ? m.before : i == 1 ? m.atom : m.after);
        const double mu = p[i] / tot;
        TestReport t = moment_z_test(x, mu, mu * (1 - mu) / (tot + 1));
        t.name = std::string("split mean ") + (i == 0 ? "before" : i == 1 ? "atom" : "after");
        t.seed = seed;
        reps.push_back(t);
      }
      write_output(common.out, tests_json(reps));
      return all_passed(reps) ? 0 : kExitFailed;
    }

    if (merge->parsed()) {
      require(!thetas.empty(), "--thetas needs at least one value");
      struct Row {
        double first, largest, second, match;
      };
      const auto rows = replicate<Row>(replicates, common.jobs, [&](std::size_t r) {
        RngStream rng(seed, r);
        const MergeInputs in = build_merge_inputs(alpha, thetas, n, rng);
        const MergeTrace tr = merge_alpha_theta(in.strings, alpha, thetas, rng);
        const auto top = ranked_masses(tr.output, 2);
        return Row{first_segment_mass(tr, in.strings), top[0], top[1], match_probability(tr.output)};
      });
      if (!json) {
        std::string s = "replicate,first_segment,largest,second,match\n";
        for (std::size_t r = 0; r < rows.size(); ++r)
          s += std::to_string(r) + "," + fmt_num(rows[r].first) + "," + fmt_num(rows[r].largest) + "," +
               fmt_num(rows[r].second) + "," + fmt_num(rows[r].match) + "\n";
        write_output(common.out, s);
        return 0;
      }
      double tsum = 0.0;
      for (double t : thetas) tsum += t;
      std::vector<double> first, match;
      for (const auto& r : rows) {
        first.push_back(r.first);
        match.push_back(r.match);
      }
      std::vector<TestReport> reps;
      reps.push_back(ks_one_sample_beta(first, 1.0, tsum));
      reps.back().name = "first segment mass ~ Beta(1," + fmt_num(tsum) + ")";
      const double pm = (1 - alpha) / (1 + tsum);
      reps.push_back(moment_z_test(match, pm, variance(match)));
      reps.back().name = "match probability = " + fmt_num(pm);
      for (auto& r : reps) r.seed = seed;
      write_output(common.out, tests_json(reps));
      return all_passed(reps) ? 0 : kExitFailed;
    }

    if (grow->parsed()) {
      require(n >= 1, "--n must be >= 1");
      RngStream rng(seed, 0);
      const RootedTree t = grow_alpha_theta(alpha, theta, n, rng);
      if (k <= 0) {
        write_output(common.out, to_json(t) + "\n");
        return 0;
      }
      require(k <= n, "--k must not exceed --n");
      std::set<int> labels;
      for (int i = 1; i <= k; ++i) labels.insert(i);
      const ReducedTree r = reduce(t, labels);
      std::string s = "vertex,parent,label,edge_length,vertex_mass,edge_mass,atoms\n";
      for (int v = 0; v < r.skeleton.size(); ++v)
        s += std::to_string(v) + "," + std::to_string(r.skeleton.parent[v]) + "," +
             std::to_string(r.skeleton.label[v]) + "," + std::to_string(r.edge_length[v]) + "," +
             fmt_num(r.vertex_mass[v]) + "," + fmt_num(r.edge_mass(v)) + "," +
             std::to_string(r.edge_atoms[v].size()) + "\n";
      write_output(common.out, s);
      return 0;
    }

    if (bmmc->parsed()) {
      require(n >= 2, "--n must be >= 2");
      if (mode.empty()) mode = "trace";
      if (mode == "matrix" || mode == "stationary") {
        const TransitionMatrix m = empirical_transition_matrix(n, replicates, seed, common.jobs);
        if (mode == "matrix") {
          write_output(common.out, to_json(m) + "\n");
        } else {
          const auto pi = stationary_vector(m);
          std::string s = "shape,probability\n";
          for (std::size_t i = 0; i < pi.size(); ++i) s += m.states[i] + "," + fmt_num(pi[i]) + "\n";
          write_output(common.out, s);
        }
        return 0;
      }
      RngStream rng(seed, 0);
      RootedTree start = grow_alpha_theta(0.5, 0.5, n, rng);
      std::fill(start.label.begin(), start.label.end(), 0);
      if (mode == "histogram") {
        const ShapeHistogram h = run_chain(start, steps, burn_in, rng);
        write_output(common.out, to_json(h) + "\n");
        return 0;
      }
      const auto trace = run_chain_trace(start, steps, rng);
      std::string s = "step,shape\n";
      for (std::size_t i = 0; i < trace.size(); ++i) s += std::to_string(i + 1) + "," + trace[i] + "\n";
      write_output(common.out, s);
      return 0;
    }

    if (embed->parsed()) {
      if (mode.empty()) mode = "spine";
      if (mode == "densities") {
        write_output(common.out, densities_csv(alpha, theta, n));
        return 0;
      }
      require(n >= 3, "--n must be >= 3");
      RngStream rng(seed, 0);
      auto proxy = std::make_shared<const RootedTree>(grow_alpha_theta(alpha, 1 - alpha, n, rng));
      const StartConfig c = ford_start_config(proxy, alpha, rng);
      if (mode == "start") {
        const auto m = c.masses();
        std::string s = "E0,E1,E2,E3,rho_theta\n";
        for (int i = 0; i < 5; ++i) s += fmt_num(m[i]) + (i < 4 ? "," : "\n");
        write_output(common.out, s);
        return 0;
      }
      if (mode == "spine") {
        write_output(common.out, to_json(merge_spine(c, partition_cutpoints(c, alpha, 64, rng))) + "\n");
        return 0;
      }
      const auto spaces = recursive_embed(proxy, alpha, k, std::max(64, k + 2), rng);
      std::string s;
      for (const auto& b : spaces) s += to_json(b) + "\n";
      write_output(common.out, s);
      return 0;
    }

    if (accept->parsed()) {
      AcceptanceConfig cfg;
      cfg.seed = seed;
      cfg.jobs = common.jobs;
      cfg.criteria = criteria;
      const auto results = run_acceptance(cfg);
      write_output(common.out, acceptance_report(results));
      bool ok = true;
      for (const auto& r : results) {
        std::cerr << summary_line(r) << "\n";
        ok = ok && r.passed;
      }
      return ok ? 0 : kExitFailed;
    }
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
