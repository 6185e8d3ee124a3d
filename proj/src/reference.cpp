#include "beadforge/reference.hpp"

#include <algorithm>
#include <functional>

#include "beadforge/errors.hpp"

namespace beadforge::reference {

std::vector<std::vector<int>> set_partitions(int n) {
  if (n < 0 || n > 12) throw ParameterError("set_partitions: n out of range");
  std::vector<std::vector<int>> out;
  std::vector<int> block(n, 0);
  // Restricted growth strings: block[i] <= 1 + max(block[0..i-1]).
  std::function<void(int, int)> rec = [&](int i, int used) {
    if (i == n) {
      std::vector<int> sizes(used, 0);
      for (int b : block) ++sizes[b];
      out.push_back(sizes);
      return;
    }
    for (int b = 0; b <= used && b < n; ++b) {
      block[i] = b;
      rec(i + 1, std::max(used, b + 1));
    }
  };
  if (n == 0) return {{}};
  rec(0, 0);
  return out;
}

std::map<int, double> edge_selection(const RootedTree& t, double alpha, double theta) {
  const int nv = t.size();
  std::vector<int> size(nv, 0), min_label(nv, 1 << 30);
  std::function<void(int)> post = [&](int v) {
    if (t.is_leaf(v)) {
      size[v] = 1;
      min_label[v] = t.label[v];
      return;
    }
    for (int c : t.children[v]) {
      post(c);
      size[v] += size[c];
      min_label[v] = std::min(min_label[v], min_label[c]);
    }
  };
  post(t.root);
  std::map<int, double> out;
  // Subtree reached through the edge into v, entered with probability p.
  std::function<void(int, double)> select = [&](int v, double p) {
    if (t.is_leaf(v)) {
      out[v] += p;
      return;
    }
    if (t.children[v].size() != 2) throw ParameterError("edge_selection: tree is not binary");
    int c1 = t.children[v][0], c0 = t.children[v][1];
    if (min_label[c0] < min_label[c1]) std::swap(c0, c1);
    const double total = size[v] - 1 + theta;
    out[v] += p * alpha / total;
    select(c0, p * (size[c0] - alpha) / total);
    select(c1, p * (size[c1] - 1 + theta) / total);
  };
  if (t.children[t.root].size() != 1) throw ParameterError("edge_selection: root must have one child");
  select(t.children[t.root][0], 1.0);
  return out;
}

namespace {

RootedTree subdivide(const RootedTree& t, int v, int new_label) {
  RootedTree s = t;
  const int p = s.parent[v];
  const int w = s.add_vertex(p);
  auto& ch = s.children[p];
  ch.pop_back();
  std::replace(ch.begin(), ch.end(), v, w);
  s.children[w].push_back(v);
  s.parent[v] = w;
  const int leaf = s.add_vertex(w);
  s.label[leaf] = new_label;
  return s;
}

}  // namespace

std::map<std::string, double> growth_distribution(double alpha, double theta, int n) {
  if (n < 1 || n > 7) throw ParameterError("growth_distribution: n out of range");
  std::vector<std::pair<RootedTree, double>> level{{make_root_leaf_tree(), 1.0}};
  for (int m = 1; m < n; ++m) {
    std::vector<std::pair<RootedTree, double>> next;
    for (const auto& [t, p] : level) {
      // T_1 has a single edge; the rule starts at T_2.
      const auto sel = m == 1 ? std::map<int, double>{{t.children[t.root][0], 1.0}}
                              : edge_selection(t, alpha, theta);
      for (const auto& [v, q] : sel)
        if (q > 0.0) next.push_back({subdivide(t, v, m + 1), p * q});
    }
    level = std::move(next);
  }
  std::map<std::string, double> out;
  for (const auto& [t, p] : level) out[labelled_shape(t)] += p;
  return out;
}

std::map<std::vector<int>, double> ordered_crp_compositions(double alpha, double theta, int n) {
  if (n < 0 || n > 10) throw ParameterError("ordered_crp_compositions: n out of range");
  std::map<std::vector<int>, double> cur{{{}, 1.0}};
  for (int m = 0; m < n; ++m) {
    std::map<std::vector<int>, double> next;
    for (const auto& [c, p] : cur) {
      const int k = static_cast<int>(c.size());
      const double denom = m + theta;
      for (int i = 0; i < k; ++i) {
        auto d = c;
        ++d[i];
        next[d] += p * (c[i] - alpha) / denom;
      }
      const double fresh = k * alpha + theta;
      if (fresh <= 0.0) continue;
      // Left of table j with weight alpha each, at the right end with theta.
      for (int j = 0; j <= k; ++j) {
        const double w = j < k ? alpha : theta;
        if (w <= 0.0) continue;
        auto d = c;
        d.insert(d.begin() + j, 1);
        next[d] += p * (fresh / denom) * (w / fresh);
      }
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace beadforge::reference
