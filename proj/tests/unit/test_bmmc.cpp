#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "beadforge/bmmc.hpp"
#include "beadforge/errors.hpp"
#include "beadforge/stats.hpp"

using namespace beadforge;

TEST(Bmmc, TwoLeafChainIsPointMassOnY) {
  const auto m = exact_transition_matrix(2);
  const auto y = canonical_shape(make_y_tree());
  const auto it = std::find(m.states.begin(), m.states.end(), y);
  ASSERT_NE(it, m.states.end());
  const auto i = static_cast<std::size_t>(it - m.states.begin());
  EXPECT_NEAR(m.rows[i][i], 1.0, 1e-12);
}

TEST(Bmmc, ExactRowsAreStochastic) {
  for (int n = 2; n <= 5; ++n) {
    const auto m = exact_transition_matrix(n);
    EXPECT_EQ(m.states, enumerate_shapes(n, false));
    for (const auto& row : m.rows) EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-12);
  }
}

TEST(Bmmc, BinaryShapesFormTheUniqueClosedClass) {
  for (int n = 2; n <= 5; ++n) {
    const auto m = exact_transition_matrix(n);
    const auto classes = closed_classes(m);
    ASSERT_EQ(classes.size(), 1u) << n;
    std::set<std::string> got, want;
    for (int i : classes[0]) got.insert(m.states[i]);
    for (const auto& s : enumerate_shapes(n, true)) want.insert(s);
    EXPECT_EQ(got, want) << n;
  }
}

TEST(Bmmc, StationaryVectorIsFixedPoint) {
  const auto m = exact_transition_matrix(4);
  const auto pi = stationary_vector(m);
  EXPECT_NEAR(std::accumulate(pi.begin(), pi.end(), 0.0), 1.0, 1e-12);
  for (std::size_t j = 0; j < pi.size(); ++j) {
    double s = 0;
    for (std::size_t i = 0; i < pi.size(); ++i) s += pi[i] * m.rows[i][j];
    EXPECT_NEAR(s, pi[j], 1e-10);
  }
}

TEST(Bmmc, StepPreservesLeafCountAndValidity) {
  for (int n : {2, 3, 5, 8, 13}) {
    RngStream r(3, n);
    ChainState s{grow_alpha_theta(0.5, 0.5, n, r), 0};
    for (int k = 0; k < 300; ++k) {
      s = bmmc_discrete_step(s, r);
      ASSERT_NO_THROW(validate(s.tree));
      ASSERT_EQ(s.tree.n_leaves(), n);
      EXPECT_EQ(s.step_count, k + 1);
    }
  }
}

TEST(Bmmc, BinaryStartsStayBinary) {
  RngStream r(5, 5);
  ChainState s{tree_from_shape(enumerate_shapes(6, true).front()), 0};
  for (int k = 0; k < 2000; ++k) {
    s = bmmc_discrete_step(s, r);
    ASSERT_TRUE(is_binary(s.tree)) << canonical_shape(s.tree);
  }
}

TEST(Bmmc, EmpiricalMatrixMatchesExact) {
  const auto exact = exact_transition_matrix(4);
  const auto emp = empirical_transition_matrix(4, 20000, 17);
  ASSERT_EQ(emp.states, exact.states);
  for (std::size_t i = 0; i < exact.rows.size(); ++i) EXPECT_LT(tv_distance(emp.rows[i], exact.rows[i]), 0.02);
}

TEST(Bmmc, EmpiricalMatrixIndependentOfJobs) {
  const auto a = empirical_transition_matrix(4, 2000, 9, 1);
  const auto b = empirical_transition_matrix(4, 2000, 9, 4);
  EXPECT_EQ(a.rows, b.rows);
}

TEST(Bmmc, ReplayedChoiceGivesSameTree) {
  RngStream r(6, 6);
  const auto t = grow_alpha_theta(0.5, 0.5, 6, r);
  RngStream a(7, 1), b(7, 1);
  const auto c = sample_transition(t, a);
  const auto s = bmmc_discrete_step({t, 0}, b);
  EXPECT_EQ(labelled_shape(apply_transition(t, c)), labelled_shape(s.tree));
}

TEST(Bmmc, RunChainCountsAndErrors) {
  RngStream r(8, 8);
  const auto t = grow_alpha_theta(0.5, 0.5, 4, r);
  const auto h = run_chain(t, 10, 9, r);
  EXPECT_EQ(h.total, 1);
  const auto full = run_chain(t, 500, 0, r);
  EXPECT_EQ(full.total, 500);
  std::int64_t s = 0;
  for (const auto& [k, c] : full.counts) s += c;
  EXPECT_EQ(s, 500);
  EXPECT_EQ(run_chain_trace(t, 25, r).size(), 25u);
  EXPECT_THROW(run_chain(t, 5, 5, r), ParameterError);
  EXPECT_THROW(run_chain(t, -1, 0, r), ParameterError);
}

TEST(Bmmc, ContinuumStepConservesMass) {
  for (std::uint64_t i = 0; i < 5; ++i) {
    RngStream r(9, i);
    const auto proxy = grow_alpha_theta(0.5, 0.5, 2000, r);
    const auto res = bmmc_continuum_step(proxy, r);
    EXPECT_NEAR(res.after_total_mass, 1.0, 1e-9);
    EXPECT_EQ(res.after_tree.n_leaves(), 1999);  // Sigma~_1 is dropped, nothing is inserted
    EXPECT_NEAR(res.before.branch_masses[0] + res.before.branch_masses[1] + res.before.branch_masses[2], 1.0, 1e-9);
    EXPECT_GE(res.before.top_atoms[0], res.before.top_atoms[1]);
  }
  RngStream r(1, 1);
  EXPECT_THROW(bmmc_continuum_step(grow_alpha_theta(0.5, 0.5, 10, r), r), ParameterError);
}
