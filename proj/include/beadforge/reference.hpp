#pragma once

#include <map>
#include <string>
#include <vector>

#include "beadforge/trees.hpp"

// Brute-force enumerations used as oracles by the tests and the acceptance
// suite. Exponential cost; keep n small.
namespace beadforge::reference {

// Block sizes of every set partition of [n], one entry per partition.
std::vector<std::vector<int>> set_partitions(int n);

// Edge selection law of the (alpha, theta) rule on a labelled binary tree,
// keyed by the lower endpoint of each edge.
std::map<int, double> edge_selection(const RootedTree& t, double alpha, double theta);

// Law of labelled_shape(T_n) for the (alpha, theta) growth process.
std::map<std::string, double> growth_distribution(double alpha, double theta, int n);

// Law of the composition (table sizes in table order) of an ordered
// (alpha, theta)-CRP with n customers, keyed by the size list.
std::map<std::vector<int>, double> ordered_crp_compositions(double alpha, double theta, int n);

}  // namespace beadforge::reference
