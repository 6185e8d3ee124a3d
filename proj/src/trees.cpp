#include "beadforge/trees.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include <json.hpp>

#include "beadforge/errors.hpp"

namespace beadforge {

int RootedTree::add_vertex(int parent_id) {
  const int id = size();
  parent.push_back(parent_id);
  children.emplace_back();
  label.push_back(0);
  if (parent_id >= 0) children[parent_id].push_back(id);
  return id;
}

std::vector<int> RootedTree::leaves() const {
  std::vector<int> out;
  for (int v = 0; v < size(); ++v)
    if (is_leaf(v)) out.push_back(v);
  return out;
}

int RootedTree::n_leaves() const {
  int n = 0;
  for (int v = 0; v < size(); ++v) n += is_leaf(v);
  return n;
}

bool RootedTree::labelled() const {
  for (int v = 0; v < size(); ++v)
    if (is_leaf(v) && label[v] > 0) return true;
  return false;
}

std::vector<int> preorder(const RootedTree& t) {
  std::vector<int> order;
  order.reserve(t.size());
  std::vector<int> stack{t.root};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (auto it = t.children[v].rbegin(); it != t.children[v].rend(); ++it) stack.push_back(*it);
  }
  return order;
}

std::vector<int> leaf_counts(const RootedTree& t) {
  std::vector<int> c(t.size(), 0);
  const auto order = preorder(t);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    if (t.is_leaf(v)) c[v] = 1;
    if (t.parent[v] >= 0) c[t.parent[v]] += c[v];
  }
  return c;
}

std::vector<int> depths(const RootedTree& t) {
  std::vector<int> d(t.size(), 0);
  for (int v : preorder(t))
    if (t.parent[v] >= 0) d[v] = d[t.parent[v]] + 1;
  return d;
}

int leaf_with_label(const RootedTree& t, int label) {
  for (int v = 0; v < t.size(); ++v)
    if (t.label[v] == label && t.is_leaf(v)) return v;
  throw ParameterError("no leaf carries label " + std::to_string(label));
}

void validate(const RootedTree& t) {
  const int n = t.size();
  if (n == 0) throw ParameterError("tree: empty arena");
  if (static_cast<int>(t.children.size()) != n || static_cast<int>(t.label.size()) != n)
    throw ParameterError("tree: arena arrays disagree in size");
  if (t.root < 0 || t.root >= n || t.parent[t.root] != -1) throw ParameterError("tree: bad root");
  for (int v = 0; v < n; ++v) {
    if (v != t.root && (t.parent[v] < 0 || t.parent[v] >= n)) throw ParameterError("tree: second root");
    for (int c : t.children[v])
      if (c < 0 || c >= n || t.parent[c] != v) throw ParameterError("tree: parent/child links disagree");
    if (v != t.root && t.children[v].size() == 1) throw ParameterError("tree: non-root vertex of degree 2");
  }
  if (static_cast<int>(preorder(t).size()) != n) throw ParameterError("tree: unreachable vertices or cycle");
  std::vector<int> labels;
  for (int v = 0; v < n; ++v) {
    if (t.label[v] == 0) continue;
    if (!t.is_leaf(v)) throw ParameterError("tree: label on internal vertex");
    labels.push_back(t.label[v]);
  }
  if (!labels.empty()) {
    std::sort(labels.begin(), labels.end());
    if (static_cast<int>(labels.size()) != t.n_leaves()) throw ParameterError("tree: partially labelled");
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] != static_cast<int>(i) + 1) throw ParameterError("tree: labels are not 1..n");
  }
}

RootedTree make_root_leaf_tree() {
  RootedTree t;
  t.add_vertex(-1);
  t.label[t.add_vertex(0)] = 1;
  return t;
}

RootedTree make_y_tree() {
  RootedTree t;
  t.add_vertex(-1);
  const int b = t.add_vertex(0);
  t.label[t.add_vertex(b)] = 1;
  t.label[t.add_vertex(b)] = 2;
  return t;
}

RootedTree make_cherry_tree() { return make_star_tree(2); }

RootedTree make_star_tree(int n) {
  RootedTree t;
  t.add_vertex(-1);
  for (int i = 0; i < n; ++i) t.add_vertex(0);
  return t;
}

bool is_binary(const RootedTree& t) {
  if (t.children[t.root].size() != 1) return false;
  for (int v = 0; v < t.size(); ++v)
    if (v != t.root && !t.children[v].empty() && t.children[v].size() != 2) return false;
  return true;
}

int copy_subtree(const RootedTree& src, int v, RootedTree& dst, int new_parent) {
  const int top = dst.add_vertex(new_parent);
  dst.label[top] = src.label[v];
  std::vector<std::pair<int, int>> stack{{v, top}};
  while (!stack.empty()) {
    const auto [s, d] = stack.back();
    stack.pop_back();
    for (int c : src.children[s]) {
      const int nc = dst.add_vertex(d);
      dst.label[nc] = src.label[c];
      stack.push_back({c, nc});
    }
  }
  return top;
}

RootedTree suppress_degree2(const RootedTree& t) {
  RootedTree out;
  out.add_vertex(-1);
  out.label[0] = t.label[t.root];
  std::vector<std::pair<int, int>> stack{{t.root, 0}};
  while (!stack.empty()) {
    const auto [s, d] = stack.back();
    stack.pop_back();
    for (int c : t.children[s]) {
      int x = c;
      while (t.children[x].size() == 1) x = t.children[x][0];
      const int nx = out.add_vertex(d);
      out.label[nx] = t.label[x];
      stack.push_back({x, nx});
    }
  }
  return out;
}

RootedTree grow_alpha_theta(double alpha, double theta, int n, RngStream& rng) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ParameterError("grow: alpha must lie in [0,1)");
  if (!(theta >= 0.0)) throw ParameterError("grow: theta must be non-negative");
  if (n < 1) throw ParameterError("grow: n must be positive");

  // Compact binary arena; spin[v] holds the child with the smaller labels.
  const int cap = 2 * n;
  std::vector<int> par(cap, -1), spin(cap, -1), side(cap, -1), cnt(cap, 0), lab(cap, 0);
  par[1] = 0;
  spin[0] = 1;
  cnt[0] = cnt[1] = 1;
  lab[1] = 1;
  int used = 2;

  for (int m = 1; m < n; ++m) {
    ++cnt[0];
    int c = spin[0];
    while (spin[c] >= 0) {
      const int s = spin[c], a = side[c];
      const double wa = cnt[a] - alpha;
      const double ws = cnt[s] - 1 + theta;
      const double x = rng.uniform() * (alpha + wa + ws);
      if (x < alpha) break;
      ++cnt[c];
      c = x < alpha + wa ? a : s;
    }
    const int w = used++, leaf = used++;
    const int p = par[c];
    (spin[p] == c ? spin[p] : side[p]) = w;
    par[w] = p;
    spin[w] = c;
    side[w] = leaf;
    par[c] = w;
    par[leaf] = w;
    cnt[w] = cnt[c] + 1;
    cnt[leaf] = 1;
    lab[leaf] = m + 1;
  }

  RootedTree t;
  t.parent.assign(par.begin(), par.begin() + used);
  t.label.assign(lab.begin(), lab.begin() + used);
  t.children.resize(used);
  for (int v = 0; v < used; ++v) {
    if (spin[v] >= 0) t.children[v].push_back(spin[v]);
    if (side[v] >= 0) t.children[v].push_back(side[v]);
  }
  return t;
}

double ReducedTree::edge_mass(int s) const {
  double m = vertex_mass[s];
  for (const auto& a : edge_atoms[s]) m += a.mass;
  return m;
}

double ReducedTree::total_length() const {
  double l = 0.0;
  for (int v : edge_length) l += v;
  return l;
}

ReducedTree reduce(const RootedTree& tree, const std::set<int>& labels) {
  const int nv = tree.size();
  std::vector<char> on(nv, 0), chosen(nv, 0);
  std::map<int, int> by_label;
  for (int v = 0; v < nv; ++v)
    if (tree.label[v] > 0 && tree.is_leaf(v)) by_label[tree.label[v]] = v;
  for (int l : labels) {
    const auto it = by_label.find(l);
    if (it == by_label.end()) throw ParameterError("reduce: unknown label " + std::to_string(l));
    chosen[it->second] = 1;
    for (int v = it->second; v >= 0 && !on[v]; v = tree.parent[v]) on[v] = 1;
  }
  on[tree.root] = 1;

  const auto lc = leaf_counts(tree);
  const double n = lc[tree.root];
  auto projected = [&](int v) {
    double m = tree.is_leaf(v) ? 1.0 : 0.0;
    for (int c : tree.children[v])
      if (!on[c]) m += lc[c];
    return m / n;
  };
  auto on_children = [&](int v) {
    int k = 0;
    for (int c : tree.children[v]) k += on[c];
    return k;
  };

  ReducedTree r;
  auto add = [&](int parent_sk, int tree_v, int length) {
    const int s = r.skeleton.add_vertex(parent_sk);
    r.skeleton.label[s] = chosen[tree_v] ? tree.label[tree_v] : 0;
    r.tree_vertex.push_back(tree_v);
    r.edge_length.push_back(length);
    r.vertex_mass.push_back(projected(tree_v));
    r.edge_atoms.emplace_back();
    return s;
  };
  add(-1, tree.root, 0);
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const int s = stack.back();
    stack.pop_back();
    const int tv = r.tree_vertex[s];
    for (int c : tree.children[tv]) {
      if (!on[c]) continue;
      std::vector<ReducedAtom> atoms;
      int x = c, dist = 1;
      while (!chosen[x] && on_children(x) == 1) {
        const double m = projected(x);
        if (m > 0.0) atoms.push_back({dist, m, x});
        for (int cc : tree.children[x])
          if (on[cc]) {
            x = cc;
            break;
          }
        ++dist;
      }
      const int w = add(s, x, dist);
      r.edge_atoms[w] = std::move(atoms);
      stack.push_back(w);
    }
  }
  return r;
}

namespace {

std::string shape_code(const RootedTree& t, bool with_labels) {
  std::vector<std::string> code(t.size());
  const auto order = preorder(t);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    if (t.is_leaf(v)) {
      code[v] = with_labels ? std::to_string(t.label[v]) : "()";
      continue;
    }
    std::vector<std::string> parts;
    for (int c : t.children[v]) parts.push_back(std::move(code[c]));
    std::sort(parts.begin(), parts.end());
    std::string s = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (with_labels && i > 0) s += ",";
      s += parts[i];
    }
    code[v] = s + ")";
  }
  return code[t.root];
}

}  // namespace

std::string canonical_shape(const RootedTree& t) { return shape_code(t, false); }
std::string labelled_shape(const RootedTree& t) { return shape_code(t, true); }

RootedTree tree_from_shape(const std::string& code) {
  if (code.size() < 2 || code.front() != '(') throw ParameterError("shape: malformed code");
  RootedTree t;
  int cur = -1;
  for (std::size_t i = 0; i < code.size(); ++i) {
    const char ch = code[i];
    if (ch == '(') {
      cur = cur < 0 ? t.add_vertex(-1) : t.add_vertex(cur);
    } else if (ch == ')') {
      if (cur < 0) throw ParameterError("shape: unbalanced code");
      cur = t.parent[cur];
    } else if (ch >= '0' && ch <= '9' && cur >= 0) {
      // Labelled leaf.
      int label = 0;
      for (; i < code.size() && code[i] >= '0' && code[i] <= '9'; ++i) label = 10 * label + (code[i] - '0');
      --i;
      t.label[t.add_vertex(cur)] = label;
    } else if (ch != ',' || cur < 0) {
      throw ParameterError("shape: unexpected character");
    }
  }
  if (cur != -1) throw ParameterError("shape: unbalanced code");
  return t;
}

std::vector<std::string> enumerate_shapes(int n, bool binary_only) {
  if (n < 1) throw ParameterError("enumerate_shapes: n must be positive");
  if (n > 8) throw ResourceError("enumerate_shapes: n > 8 is not enumerated");
  // sub[m]: codes of subtrees (hanging below an edge) with m leaves, sorted.
  std::vector<std::vector<std::string>> sub(n + 1);
  sub[1] = {"()"};
  for (int m = 2; m <= n; ++m) {
    std::set<std::string> found;
    // Children as a non-increasing sequence of (size, code index) pairs.
    std::vector<std::string> picked;
    std::function<void(int, int, int)> rec = [&](int left, int max_size, int max_idx) {
      if (left == 0) {
        if (picked.size() < 2) return;
        if (binary_only && picked.size() != 2) return;
        auto parts = picked;
        std::sort(parts.begin(), parts.end());
        std::string s = "(";
        for (const auto& p : parts) s += p;
        found.insert(s + ")");
        return;
      }
      for (int sz = std::min(left, max_size); sz >= 1; --sz) {
        if (sz == m) continue;
        const int top = sz == max_size ? max_idx : static_cast<int>(sub[sz].size()) - 1;
        for (int i = top; i >= 0; --i) {
          picked.push_back(sub[sz][i]);
          rec(left - sz, sz, i);
          picked.pop_back();
        }
      }
    };
    rec(m, m, static_cast<int>(sub[m].size()) - 1);
    sub[m].assign(found.begin(), found.end());
  }
  std::set<std::string> shapes;
  for (const auto& s : sub[n]) {
    shapes.insert("(" + s + ")");
    if (!binary_only && n >= 2) shapes.insert(s);
  }
  return {shapes.begin(), shapes.end()};
}

Composition spinal_composition(const RootedTree& t) {
  const int leaf1 = leaf_with_label(t, 1);
  const auto lc = leaf_counts(t);
  std::vector<int> path;
  for (int v = leaf1; v >= 0; v = t.parent[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  Composition c;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    int part = 0;
    for (int ch : t.children[path[i]])
      if (ch != path[i + 1]) part += lc[ch];
    if (part > 0) c.parts.push_back(part);
  }
  for (int p : c.parts) c.n += p;
  return c;
}

std::string to_json(const RootedTree& t) {
  nlohmann::ordered_json j;
  j["root"] = t.root;
  j["vertices"] = nlohmann::ordered_json::array();
  for (int v = 0; v < t.size(); ++v)
    j["vertices"].push_back({{"id", v}, {"parent", t.parent[v] < 0 ? nlohmann::ordered_json() : nlohmann::ordered_json(t.parent[v])}, {"children", t.children[v]}});
  nlohmann::ordered_json labels = nlohmann::ordered_json::object();
  for (int v = 0; v < t.size(); ++v)
    if (t.label[v] > 0) labels[std::to_string(v)] = t.label[v];
  j["leaf_labels"] = labels;
  return j.dump();
}

}  // namespace beadforge
