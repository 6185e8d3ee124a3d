#pragma once

#include <set>
#include <string>
#include <vector>

#include "beadforge/crp.hpp"
#include "beadforge/rng.hpp"

namespace beadforge {

// Arena tree with unit edges. label[v] in 1..n for labelled leaves, 0 otherwise.
struct RootedTree {
  std::vector<int> parent;
  std::vector<std::vector<int>> children;
  std::vector<int> label;
  int root = 0;

  int size() const { return static_cast<int>(parent.size()); }
  bool is_leaf(int v) const { return children[v].empty() && v != root; }
  int add_vertex(int parent_id);
  std::vector<int> leaves() const;
  int n_leaves() const;
  bool labelled() const;
};

// Throws ParameterError on a broken invariant (links, cycles, degree-2 vertices, labels).
void validate(const RootedTree& t);

RootedTree make_root_leaf_tree();  // T_1: root -- leaf 1
RootedTree make_y_tree();          // T_2 growth shape, labels 1, 2
RootedTree make_cherry_tree();     // root with two leaf children, unlabelled
RootedTree make_star_tree(int n);  // root with n leaf children, unlabelled

bool is_binary(const RootedTree& t);

// Root first; parents precede children.
std::vector<int> preorder(const RootedTree& t);
std::vector<int> leaf_counts(const RootedTree& t);
std::vector<int> depths(const RootedTree& t);
int leaf_with_label(const RootedTree& t, int label);

// Subtrees rooted at `v`, copied under `new_parent` of `dst` (labels kept).
int copy_subtree(const RootedTree& src, int v, RootedTree& dst, int new_parent);

// Non-root vertices with a single child are spliced out.
RootedTree suppress_degree2(const RootedTree& t);

// (alpha, theta) growth: at a subtree with root edge e, nonspinal part of m
// leaves and spinal part (holding the smallest label) of s leaves, choose e,
// the nonspinal part or the spinal part with weights alpha, m - alpha,
// s - 1 + theta, and recurse; a single leaf takes its own edge. The chosen edge
// is subdivided and leaf n+1 hung from the new vertex.
RootedTree grow_alpha_theta(double alpha, double theta, int n, RngStream& rng);

struct ReducedAtom {
  int distance = 0;   // from the edge's rootward end
  double mass = 0.0;
  int vertex = -1;    // tree vertex carrying the atom
};

// Skeleton spanned by the root and chosen leaves; tree mass projected onto it.
// Per-skeleton-vertex arrays describe the vertex itself and the edge above it.
struct ReducedTree {
  RootedTree skeleton;
  std::vector<int> tree_vertex;
  std::vector<int> edge_length;
  std::vector<double> vertex_mass;
  std::vector<std::vector<ReducedAtom>> edge_atoms;

  double edge_mass(int s) const;
  double total_length() const;
};

ReducedTree reduce(const RootedTree& tree, const std::set<int>& labels);

// Leaf "()", any other vertex "(" + sorted child codes + ")".
std::string canonical_shape(const RootedTree& t);
// Same with leaves written as their labels.
std::string labelled_shape(const RootedTree& t);
// Accepts both canonical_shape and labelled_shape codes.
RootedTree tree_from_shape(const std::string& code);

// Shapes of rooted trees with n leaves and no non-root degree-2 vertex.
// binary_only keeps root degree 1 with all internal vertices of degree 3.
std::vector<std::string> enumerate_shapes(int n, bool binary_only);

// Sizes of the subtrees hanging off the path root -> leaf 1, root side first.
Composition spinal_composition(const RootedTree& t);

std::string to_json(const RootedTree& t);

}  // namespace beadforge
