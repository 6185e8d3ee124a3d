#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "beadforge/beads.hpp"
#include "beadforge/merge.hpp"
#include "beadforge/rng.hpp"
#include "beadforge/trees.hpp"

namespace beadforge {

// Subtree hanging from one atom: the children `roots` of `vertex` in `tree`.
struct BeadHandle {
  std::shared_ptr<const RootedTree> tree;
  int vertex = -1;
  std::vector<int> roots;
  int n_leaves = 0;
  double length_scale = 1.0;  // physical length of one edge of `tree`
};

struct LabelledBead {
  double position = 0.0;  // physical distance from the branch's base
  double mass = 0.0;
  BeadHandle subtree;
  std::vector<int> labels;
};

// Branch k-1 runs from its attachment point to leaf Sigma_k.
struct BeadBranch {
  int parent_branch = -1;
  double attach_position = 0.0;
  double length = 0.0;
  int leaf_label = 1;
  std::vector<LabelledBead> beads;  // increasing positions
};

struct BeadSpace {
  std::vector<BeadBranch> branches;
  std::vector<int> outstanding;     // sorted labels still carried by beads
  double rho_theta_position = 0.0;  // on branch 0; end of the unmerged prefix

  double total_mass() const;
  double total_length() const;
};

// Disjoint label sets covering `outstanding`, positive masses, ordered
// positions inside [0, length].
void validate(const BeadSpace& s);

struct StartConfig {
  std::shared_ptr<const RootedTree> tree;
  int sigma1 = -1, sigma1_tilde = -1, theta_leaf = -1, omega = -1, rho_theta = -1;
  // E_0 = ]]rho,Omega[[, E_1 = ]]Omega,Sigma_1[[, E_2 = ]]Omega,rho_Theta[[,
  // E_3 = ]]rho_Theta,Sigma~_1[[ in physical length units.
  std::array<StringOfBeads, 4> branches;
  std::array<std::vector<BeadHandle>, 4> handles;
  double rho_theta_mass = 0.0;
  BeadHandle rho_theta_handle;

  // (E_0, E_1, E_2, E_3, rho_Theta)
  std::array<double, 5> masses() const;
};

// Three distinct uniform leaves of a (1/2,1/2)-grown proxy; unit mass, edges
// of length n^-1/2.
StartConfig brownian_start_config(std::shared_ptr<const RootedTree> proxy, RngStream& rng);

// Leaves 1, 2, 3 of an (alpha, 1-alpha)-grown proxy; edges of length n^-alpha.
StartConfig ford_start_config(std::shared_ptr<const RootedTree> proxy, double alpha, RngStream& rng);

// Start configuration from three given leaves, with total mass `mass`
// spread evenly over every leaf except Sigma_1 and Sigma~_1.
StartConfig start_config_from_leaves(std::shared_ptr<const RootedTree> tree, std::array<int, 3> leaves,
                                     double mass, double length_scale);

// Location of Y_k: branch 0..3 with an atom index, or branch 4 for rho_Theta.
struct AtomLoc {
  int branch = 4;
  int atom = 0;
  bool operator==(const AtomLoc&) const = default;
};

struct Partition {
  std::vector<int> labels;   // labels[i] is placed at y[i]; labels[0] at rho_Theta
  std::vector<AtomLoc> y;
  CutSequence cuts;          // over (E_1, E_2, E_3)
};

// Places labels 2..label_budget.
Partition partition_cutpoints(const StartConfig& config, double alpha, int label_budget, RngStream& rng);

// Places the given labels; the first one goes to rho_Theta.
Partition partition_labels(const StartConfig& config, double alpha, const std::vector<int>& labels,
                           RngStream& rng);

// E_0, then rho_Theta, then the merged E_1, E_2, E_3; spine ends at Sigma_1.
BeadSpace merge_spine(const StartConfig& config, const Partition& partition);

struct EmbedOptions {
  int resolution_floor = 200;
  int regrow_leaves = 0;  // 0: same size as the proxy
};

// R~_1 .. R~_K on an (alpha, 1-alpha)-grown proxy.
std::vector<BeadSpace> recursive_embed(std::shared_ptr<const RootedTree> proxy, double alpha, int K,
                                       int label_budget, RngStream& rng,
                                       const EmbedOptions& options = {});

// (total length, mass below rho_1, mass on ]]rho_1,Sigma_1]], mass on branch 2)
std::array<double, 4> two_leaf_summary(const BeadSpace& s);

struct Densities {
  double f = 0.0;
  double f_star = 0.0;
  double f_o = 0.0;  // NaN unless u > 1/2
};

Densities densities(double alpha, double theta, double u);

// Gamma(1-alpha)^-1 times the four-term dislocation expression; symmetric in u.
double dislocation_four_term(double alpha, double theta, double u);

std::string to_json(const BeadSpace& s);
std::string densities_csv(double alpha, double theta, int points);

}  // namespace beadforge
