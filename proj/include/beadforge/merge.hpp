#pragma once

#include <string>
#include <vector>

#include "beadforge/beads.hpp"
#include "beadforge/distributions.hpp"
#include "beadforge/rng.hpp"

namespace beadforge {

/// Index of an atom inside one of several input strings (both 0-based).
struct AtomRef {
  int string_index = 0;
  int atom_index = 0;

  bool operator==(const AtomRef&) const = default;
};

/// Cut points in merge order. Per string, atom indices must increase.
struct CutSequence {
  std::vector<AtomRef> cuts;
};

/// Segment (from_atom, to_atom] of one input string; from_atom = -1 means
/// the segment starts at the string's left end.
struct MergeSegment {
  int string_index = 0;
  int from_atom = -1;
  int to_atom = 0;
};

struct MergeTrace {
  std::vector<MergeSegment> segments;
  StringOfBeads output;
  /// Input atoms behind each output atom. More than one entry means atoms
  /// fused at a closed segment boundary.
  std::vector<std::vector<AtomRef>> sources;
};

/// Concatenates segments in cut order.
///
/// Strings not exhausted by `cuts` get an implicit terminal cut at their last
/// atom, appended in string order. An atom at position 0 (closed left end)
/// opening a non-initial segment is fused into the preceding cut atom.
/// Output length is the sum of input lengths; atom-free tails of the inputs
/// end up after the last output atom.
MergeTrace merge_with_cutpoints(const std::vector<StringOfBeads>& strings, const CutSequence& cuts);

/// Randomized merge: pick a string proportionally to remaining mass, coin-toss
/// within its remainder with (alpha, theta_i), cut there, repeat until every
/// atom is used. Returns the cut order and the merged string.
MergeTrace merge_alpha_theta(const std::vector<StringOfBeads>& strings, double alpha,
                             const std::vector<double>& thetas, RngStream& rng);

/// Same draw as merge_alpha_theta, returning only the cut sequence.
CutSequence sample_merge_cuts(const std::vector<StringOfBeads>& strings, double alpha,
                              const std::vector<double>& thetas, RngStream& rng);

struct MergeInputs {
  std::vector<StringOfBeads> strings;
  SimplexVector weights;
};

/// Dirichlet(thetas) weights, then independent (alpha, theta_i) strings from
/// restaurants of crp_n customers, rescaled by (W_i^alpha, W_i).
MergeInputs build_merge_inputs(double alpha, const std::vector<double>& thetas, int crp_n,
                               RngStream& rng);

/// Mass of the first segment.
double first_segment_mass(const MergeTrace& trace, const std::vector<StringOfBeads>& strings);

std::string to_json(const MergeTrace& trace);

}  // namespace beadforge
