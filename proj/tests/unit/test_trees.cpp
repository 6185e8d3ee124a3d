#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "beadforge/errors.hpp"
#include "beadforge/reference.hpp"
#include "beadforge/stats.hpp"
#include "beadforge/trees.hpp"

using namespace beadforge;

namespace {

// Wedderburn-Etherington numbers: unlabelled rooted binary trees by leaf count.
std::vector<long> wedderburn(int n) {
  std::vector<long> w(n + 1, 0);
  w[1] = 1;
  for (int m = 2; m <= n; ++m) {
    long s = 0;
    for (int i = 1; 2 * i < m; ++i) s += w[i] * w[m - i];
    if (m % 2 == 0) s += w[m / 2] * (w[m / 2] + 1) / 2;
    w[m] = s;
  }
  return w;
}

// Series-reduced rooted trees by leaf count (every internal vertex has >= 2 children).
std::vector<long> series_reduced(int n) {
  // Multiset of >= 2 subtrees: coefficient extraction over the Euler transform.
  std::vector<long> s(n + 1, 0);
  s[1] = 1;
  for (int m = 2; m <= n; ++m) {
    // f[k]: multisets of subtrees of sizes < m with total k leaves.
    std::vector<long> f(m + 1, 0);
    f[0] = 1;
    for (int size = 1; size < m; ++size) {
      std::vector<long> g(m + 1, 0);
      for (int k = 0; k <= m; ++k) {
        if (f[k] == 0) continue;
        // choose j copies from s[size] types with repetition
        long ways = 1;
        for (int j = 0; k + j * size <= m; ++j) {
          g[k + j * size] += f[k] * ways;
          ways = ways * (s[size] + j) / (j + 1);
        }
      }
      f = g;
    }
    s[m] = f[m];
  }
  return s;
}

}  // namespace

TEST(Trees, BasicShapes) {
  const auto y = make_y_tree();
  EXPECT_NO_THROW(validate(y));
  EXPECT_EQ(y.n_leaves(), 2);
  EXPECT_TRUE(is_binary(y));
  EXPECT_EQ(canonical_shape(y), "((()()))");
  EXPECT_FALSE(is_binary(make_cherry_tree()));
  EXPECT_EQ(make_star_tree(4).n_leaves(), 4);
}

TEST(Trees, BinaryShapeCountsMatchRecursion) {
  const auto w = wedderburn(8);
  for (int n = 1; n <= 8; ++n) EXPECT_EQ(static_cast<long>(enumerate_shapes(n, true).size()), w[n]) << n;
}

TEST(Trees, AllShapeCountsMatchSeriesReduced) {
  const auto s = series_reduced(7);
  EXPECT_EQ(s[2], 1);
  EXPECT_EQ(s[4], 5);
  EXPECT_EQ(s[7], 90);
  EXPECT_EQ(enumerate_shapes(1, false).size(), 1u);
  for (int n = 2; n <= 7; ++n) EXPECT_EQ(static_cast<long>(enumerate_shapes(n, false).size()), 2 * s[n]) << n;
}

TEST(Trees, ShapeRoundTrip) {
  for (int n = 1; n <= 6; ++n)
    for (const auto& code : enumerate_shapes(n, false)) {
      const auto t = tree_from_shape(code);
      EXPECT_NO_THROW(validate(t));
      EXPECT_EQ(canonical_shape(t), code);
    }
  for (std::uint64_t i = 0; i < 50; ++i) {
    RngStream r(4, i);
    const auto t = grow_alpha_theta(0.4, 1.1, 9, r);
    EXPECT_EQ(labelled_shape(tree_from_shape(labelled_shape(t))), labelled_shape(t));
  }
  EXPECT_THROW(tree_from_shape("(()"), ParameterError);
}

TEST(Trees, CanonicalShapeIgnoresChildOrder) {
  RootedTree a = tree_from_shape("((()(()())))");
  RootedTree b = tree_from_shape("(((()())()))");
  EXPECT_EQ(canonical_shape(a), canonical_shape(b));
}

TEST(Trees, SuppressDegree2) {
  RootedTree t;
  const int r = t.add_vertex(-1);
  const int a = t.add_vertex(r);
  const int b = t.add_vertex(a);
  t.add_vertex(b);
  t.add_vertex(b);
  EXPECT_THROW(validate(t), ParameterError);
  const auto s = suppress_degree2(t);
  EXPECT_NO_THROW(validate(s));
  EXPECT_EQ(canonical_shape(s), "((()()))");
}

TEST(Trees, GrowthInvariants) {
  for (std::uint64_t i = 0; i < 200; ++i) {
    RngStream r(8, i);
    const int n = 1 + static_cast<int>(i % 30);
    const auto t = grow_alpha_theta(0.5, 0.5 + (i % 3), n, r);
    ASSERT_NO_THROW(validate(t));
    EXPECT_TRUE(is_binary(t));
    EXPECT_EQ(t.n_leaves(), n);
    for (int l = 1; l <= n; ++l) EXPECT_GE(leaf_with_label(t, l), 0);
    EXPECT_EQ(spinal_composition(t).n, n - 1);
  }
}

TEST(Trees, GrowthErrors) {
  RngStream r(1, 1);
  EXPECT_THROW(grow_alpha_theta(1.5, 0.5, 3, r), ParameterError);
  EXPECT_THROW(grow_alpha_theta(0.5, -0.1, 3, r), ParameterError);
  EXPECT_THROW(grow_alpha_theta(0.5, 0.5, 0, r), ParameterError);
}

TEST(Trees, EdgeSelectionSumsToOne) {
  RngStream r(2, 2);
  for (int k = 0; k < 20; ++k) {
    const auto t = grow_alpha_theta(0.3, 1.2, 6, r);
    const auto p = reference::edge_selection(t, 0.3, 1.2);
    double s = 0;
    for (auto [v, q] : p) {
      EXPECT_GT(q, 0.0);
      s += q;
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
    EXPECT_EQ(static_cast<int>(p.size()), t.size() - 1);
  }
}

TEST(Trees, GrowthLawMatchesExactDistribution) {
  for (auto [a, th] : std::vector<std::pair<double, double>>{{0.5, 0.5}, {0.3, 1.7}, {0.8, 0.0}}) {
    const auto law = reference::growth_distribution(a, th, 5);
    double total = 0;
    std::map<std::string, std::size_t> index;
    std::vector<double> p;
    for (const auto& [k, q] : law) {
      index[k] = p.size();
      p.push_back(q);
      total += q;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    std::vector<std::int64_t> counts(p.size(), 0);
    for (int i = 0; i < 30000; ++i) {
      RngStream r(10, i);
      const auto it = index.find(labelled_shape(grow_alpha_theta(a, th, 5, r)));
      ASSERT_NE(it, index.end());
      ++counts[it->second];
    }
    EXPECT_TRUE(chi_square_gof(counts, p).passed) << a << "," << th;
  }
}

TEST(Trees, SpinalCompositionIsOrderedCrp) {
  const double a = 0.3, th = 0.9;
  const int n = 7;
  const auto law = reference::ordered_crp_compositions(a, th, n - 1);
  std::map<std::vector<int>, std::size_t> index;
  std::vector<double> p;
  double total = 0;
  for (const auto& [k, q] : law) {
    index[k] = p.size();
    p.push_back(q);
    total += q;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  std::vector<std::int64_t> counts(p.size(), 0);
  for (int i = 0; i < 30000; ++i) {
    RngStream r(11, i);
    const auto it = index.find(spinal_composition(grow_alpha_theta(a, th, n, r)).parts);
    ASSERT_NE(it, index.end());
    ++counts[it->second];
  }
  EXPECT_TRUE(chi_square_gof(counts, p).passed);
}

TEST(Trees, ReduceConservesMass) {
  for (std::uint64_t i = 0; i < 100; ++i) {
    RngStream r(12, i);
    const int n = 3 + static_cast<int>(i % 40);
    const auto t = grow_alpha_theta(0.5, 0.5, n, r);
    const std::set<int> labels{1, 2, 3};
    const auto red = reduce(t, labels);
    double m = 0;
    for (int s = 0; s < red.skeleton.size(); ++s) m += red.edge_mass(s);
    EXPECT_NEAR(m, 1.0, 1e-12);
    EXPECT_EQ(red.skeleton.n_leaves(), 3);
    EXPECT_GE(red.total_length(), 3.0);
  }
  EXPECT_THROW(reduce(make_y_tree(), {7}), ParameterError);
}

TEST(Trees, SetPartitionsAreBell) {
  const std::vector<std::size_t> bell{1, 1, 2, 5, 15, 52, 203};
  for (int n = 1; n <= 6; ++n) EXPECT_EQ(reference::set_partitions(n).size(), bell[n]);
}
