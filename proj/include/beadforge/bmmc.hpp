#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "beadforge/rng.hpp"
#include "beadforge/trees.hpp"

namespace beadforge {

struct ChainState {
  RootedTree tree;
  std::int64_t step_count = 0;
};

struct ShapeHistogram {
  std::map<std::string, std::int64_t> counts;
  std::int64_t total = 0;
};

// Every random choice of one discrete step, so a step can be replayed or
// enumerated exhaustively.
struct TransitionChoice {
  int edge_vertex = 0;              // subdivided edge is (parent, edge_vertex)
  int sigma1 = 0;                   // indices into leaves() of the grown tree
  int sigma1_tilde = 1;
  std::vector<int> label_order;     // other leaves (indices into leaves()) carrying labels 2..n
};

// Deterministic part of the step: insert, reduce to (Sigma_1, Sigma~_1),
// cut by the labels, merge E_1=[[rho,Omega[[, E_2=]]Omega,Sigma_1[[,
// E_3=[[Omega,Sigma~_1[[, replant and drop Sigma~_1.
RootedTree apply_transition(const RootedTree& tree, const TransitionChoice& choice);

TransitionChoice sample_transition(const RootedTree& tree, RngStream& rng);

ChainState bmmc_discrete_step(const ChainState& state, RngStream& rng);

// Histogram of the shapes after transitions burn_in+1 .. steps.
ShapeHistogram run_chain(const RootedTree& initial, std::int64_t steps, std::int64_t burn_in,
                         RngStream& rng);

// Shape after every transition 1..steps.
std::vector<std::string> run_chain_trace(const RootedTree& initial, std::int64_t steps, RngStream& rng);

struct TransitionMatrix {
  std::vector<std::string> states;
  std::vector<std::vector<double>> rows;
};

// Rows estimated from samples_per_state steps out of every shape; state s
// draws from stream (seed, stream_id(tag, s)).
TransitionMatrix empirical_transition_matrix(int n, std::int64_t samples_per_state,
                                             std::uint64_t seed, int jobs = 1);

// Exact rows by enumerating all choices (test oracle; n <= 5 is quick).
TransitionMatrix exact_transition_matrix(int n);

// Power iteration on the lazy chain (P + I)/2 from the uniform vector.
std::vector<double> stationary_vector(const TransitionMatrix& m);

// Closed communicating classes of the support graph (entries > 0).
std::vector<std::vector<int>> closed_classes(const TransitionMatrix& m);

struct ProxyStats {
  std::array<double, 3> branch_masses{};  // fresh 2-leaf reduction: root edge, leaf a, leaf b
  std::array<double, 3> top_atoms{};      // ranked spine atoms, normalized
  double spine_length = 0.0;              // n^-1/2 units
};

struct ContinuumStepResult {
  ProxyStats before;
  ProxyStats after;
  double after_total_mass = 0.0;
  RootedTree after_tree;
};

// One branch-merging transition on a large (1/2,1/2)-grown proxy. Cut points
// are drawn from the normalized mass on what remains of the three branches.
ContinuumStepResult bmmc_continuum_step(const RootedTree& proxy, RngStream& rng);

std::string to_json(const TransitionMatrix& m);
std::string to_json(const ShapeHistogram& h);

}  // namespace beadforge
