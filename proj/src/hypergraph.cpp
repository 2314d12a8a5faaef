#include "ucqlab/hypergraph.hpp"

#include <algorithm>
#include <functional>

namespace ucq {

VarMask Hypergraph::vertex_mask() const {
  VarMask m = 0;
  for (VarMask e : edges) m |= e;
  return m;
}

VarMask Hypergraph::neighbors(std::size_t v) const {
  VarMask m = 0;
  for (VarMask e : edges)
    if (contains(e, v)) m |= e;
  return m & ~bit(v);
}

bool Hypergraph::adjacent(std::size_t u, std::size_t v) const {
  VarMask pair = bit(u) | bit(v);
  return std::any_of(edges.begin(), edges.end(), [&](VarMask e) { return is_subset(pair, e); });
}

bool Hypergraph::covered(VarMask set) const {
  return std::any_of(edges.begin(), edges.end(), [&](VarMask e) { return is_subset(set, e); });
}

Hypergraph Hypergraph::with_edge(VarMask e) const {
  auto all = edges;
  all.push_back(e);
  return make_hypergraph(vertex_names, all);
}

Hypergraph make_hypergraph(std::vector<std::string> names, const std::vector<VarMask>& edges) {
  Hypergraph h;
  h.vertex_names = std::move(names);
  for (VarMask e : edges) {
    if (e == 0) continue;
    if (std::find(h.edges.begin(), h.edges.end(), e) == h.edges.end()) h.edges.push_back(e);
  }
  return h;
}

Hypergraph hypergraph_of(const ConjunctiveQuery& q) {
  std::vector<VarMask> edges;
  for (std::size_t i = 0; i < q.body().size(); ++i) edges.push_back(q.atom_mask(i));
  return make_hypergraph(q.variables(), edges);
}

std::vector<std::vector<std::size_t>> JoinTree::children() const {
  std::vector<std::vector<std::size_t>> out(size());
  for (std::size_t i = 0; i < size(); ++i)
    if (parent[i] >= 0) out[static_cast<std::size_t>(parent[i])].push_back(i);
  return out;
}

std::vector<std::size_t> JoinTree::preorder() const {
  std::vector<std::size_t> order;
  if (root < 0) return order;
  auto kids = children();
  std::vector<std::size_t> stack{static_cast<std::size_t>(root)};
  while (!stack.empty()) {
    std::size_t n = stack.back();
    stack.pop_back();
    order.push_back(n);
    for (auto it = kids[n].rbegin(); it != kids[n].rend(); ++it) stack.push_back(*it);
  }
  return order;
}

std::vector<std::size_t> JoinTree::postorder() const {
  auto order = preorder();
  std::reverse(order.begin(), order.end());
  return order;
}

GyoResult gyo(const std::vector<VarMask>& edges) {
  GyoResult result;
  const std::size_t m = edges.size();
  result.tree.node_sets = edges;
  result.tree.parent.assign(m, -1);
  if (m == 0) {
    result.acyclic = true;
    return result;
  }
  std::vector<VarMask> reduced = edges;
  std::vector<bool> alive(m, true);
  std::size_t alive_count = m;

  while (alive_count > 1) {
    // Vertices owned by a single live edge carry no join constraint.
    VarMask seen_once = 0, seen_twice = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (!alive[i]) continue;
      seen_twice |= seen_once & reduced[i];
      seen_once |= reduced[i];
    }
    VarMask exclusive = seen_once & ~seen_twice;
    for (std::size_t i = 0; i < m; ++i)
      if (alive[i]) reduced[i] &= ~exclusive;

    bool removed = false;
    for (std::size_t i = 0; i < m && !removed; ++i) {
      if (!alive[i]) continue;
      for (std::size_t j = 0; j < m; ++j) {
        if (j == i || !alive[j] || !is_subset(reduced[i], reduced[j])) continue;
        alive[i] = false;
        --alive_count;
        result.tree.parent[i] = static_cast<int>(j);
        removed = true;
        break;
      }
    }
    if (!removed) break;
  }

  if (alive_count == 1) {
    result.acyclic = true;
    for (std::size_t i = 0; i < m; ++i)
      if (alive[i]) result.tree.root = static_cast<int>(i);
  } else {
    result.tree.parent.assign(m, -1);
    for (std::size_t i = 0; i < m; ++i)
      if (alive[i]) result.residue.push_back(reduced[i]);
  }
  return result;
}

GyoResult analyze_acyclicity(const Hypergraph& h) { return gyo(h.edges); }

bool is_acyclic(const Hypergraph& h) { return gyo(h.edges).acyclic; }

bool is_acyclic(const ConjunctiveQuery& q) { return is_acyclic(hypergraph_of(q)); }

bool has_running_intersection(const JoinTree& t) {
  if (t.size() == 0) return true;
  if (t.root < 0) return false;
  auto order = t.preorder();
  if (order.size() != t.size()) return false;
  VarMask all = 0;
  for (VarMask s : t.node_sets) all |= s;
  // For each vertex, the nodes holding it must form one subtree: exactly one
  // such node may have a parent lacking the vertex.
  for (std::size_t v : members(all)) {
    int tops = 0;
    for (std::size_t n = 0; n < t.size(); ++n) {
      if (!contains(t.node_sets[n], v)) continue;
      int p = t.parent[n];
      if (p < 0 || !contains(t.node_sets[static_cast<std::size_t>(p)], v)) ++tops;
    }
    if (tops != 1) return false;
  }
  return true;
}

bool is_s_connex(const Hypergraph& h, VarMask s) {
  if (!is_acyclic(h)) return false;
  if (s == 0) return true;
  return is_acyclic(h.with_edge(s));
}

bool is_s_connex(const ConjunctiveQuery& q, VarMask s) { return is_s_connex(hypergraph_of(q), s); }

bool is_s_connex(const ConjunctiveQuery& q, const std::vector<std::string>& s) {
  return is_s_connex(q, q.mask_of(s));
}

bool is_free_connex(const ConjunctiveQuery& q) { return is_s_connex(q, q.free_mask()); }

}  // namespace ucq
