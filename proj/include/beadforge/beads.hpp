#pragma once

#include <string>
#include <utility>
#include <vector>

#include "beadforge/crp.hpp"
#include "beadforge/rng.hpp"

namespace beadforge {

struct Atom {
  double position = 0.0;
  double mass = 0.0;
};

/// A finite string of beads: an interval [0, length] carrying atoms.
///
/// Positions are in local-time units j * n^-alpha with no Gamma(1-alpha)
/// factor. Every length comparison in the test suite is two-sample, so a
/// global constant would cancel.
///
/// A position of 0 marks an atom sitting on a closed left endpoint; strings
/// built from restaurants never have one, strings cut from discrete trees can.
struct StringOfBeads {
  std::vector<Atom> atoms;
  double length = 0.0;
  double total_mass = 0.0;
  bool empty = false;  ///< set for the missing side of a split

  std::size_t size() const { return atoms.size(); }
};

/// (mu([0,X)), mu(X), mu((X,L]))
struct MassSplit {
  double before = 0.0;
  double atom = 0.0;
  double after = 0.0;
};

/// Throws ParameterError describing the first violated invariant.
void validate(const StringOfBeads& s);

/// Table j in spinal order becomes atom j at position j n^-alpha with mass n_j/n.
StringOfBeads beads_from_crp(const OrderedCrpState& state);

/// Switching probability p(u) = (1-u) theta / ((1-u) theta + u alpha).
double switching_probability(double u, double alpha, double theta);

/// Left-to-right coin-tossing walk over atoms [first, masses.size()).
///
/// `suffix[i]` must hold the mass at or after atom i. Atom i is selected with
/// probability p(u_i), u_i = (R_i - m_i)/R_i. When nothing fires the last
/// atom is taken, which only matters through rounding since p(0) = 1.
std::size_t coin_toss_walk(const std::vector<double>& masses, const std::vector<double>& suffix,
                           std::size_t first, double alpha, double theta, RngStream& rng);

std::pair<std::size_t, MassSplit> coin_toss_sample(const StringOfBeads& beads, double alpha,
                                                   double theta, RngStream& rng);

/// Selection probabilities of the walk, computed exactly (test oracle).
std::vector<double> coin_toss_probabilities(const StringOfBeads& beads, double alpha, double theta);

struct SplitResult {
  StringOfBeads prefix;
  double atom_mass = 0.0;
  StringOfBeads suffix;
  MassSplit split;
};

/// Cuts at `index` and rescales both sides to unit mass: prefix lengths by
/// before^-alpha, suffix lengths by after^-alpha. An empty side has mass 0
/// and `empty` set.
SplitResult split_at(const StringOfBeads& beads, std::size_t index, double alpha);

/// Inverse of split_at: left scaled by (G^alpha, G), atom D-G, right scaled
/// by ((1-D)^alpha, 1-D).
StringOfBeads concat_beads(double G, double D, const StringOfBeads& left,
                           const StringOfBeads& right, double alpha);

/// Scale lengths by w^alpha and masses by w.
StringOfBeads rescale(const StringOfBeads& s, double w, double alpha);

struct StickBreakingBeads {
  StringOfBeads beads;
  std::vector<double> stick_masses;  ///< V_i - V_{i-1}
  double residual_mass = 0.0;        ///< 1 - V_{n_sticks}, discarded
};

/// Beta(1, theta) sticks, each shattered by an independent (alpha, 0) string
/// of crp_n customers.
StickBreakingBeads beads_via_stick_breaking(double alpha, double theta, int n_sticks, int crp_n,
                                            RngStream& rng);

double largest_mass(const StringOfBeads& s);

/// Masses sorted decreasingly, padded with zeros to `count`.
std::vector<double> ranked_masses(const StringOfBeads& s, std::size_t count);

/// Sum of squared normalized masses: chance that two mass-weighted draws coincide.
double match_probability(const StringOfBeads& s);

/// CSV with header atom_index,position,mass.
std::string to_csv(const StringOfBeads& s);

}  // namespace beadforge
