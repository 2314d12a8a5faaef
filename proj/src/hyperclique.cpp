#include "ucqlab/hyperclique.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace ucq {

UniformHypergraph hyperclique_encode(const TripartiteGraph& g, std::size_t k) {
  if (k < 3) throw GraphError("hyperclique encoding needs k >= 3");
  const std::size_t coords = k - 2;
  std::size_t radix = g.n3;
  if (coords > 1) {
    radix = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(g.n3), 1.0 / static_cast<double>(coords))));
    auto capacity = [&](std::size_t r) {
      std::size_t p = 1;
      for (std::size_t i = 0; i < coords; ++i) p *= r;
      return p;
    };
    while (radix > 1 && capacity(radix - 1) >= g.n3) --radix;  // undo rounding up
    while (capacity(radix) < g.n3) ++radix;
  }

  UniformHypergraph h;
  h.uniformity = k - 1;
  std::vector<std::size_t> first(k);  // first vertex id of each part
  std::vector<std::size_t> size(k, radix);
  size[0] = g.n1;
  size[1] = g.n2;
  for (std::size_t p = 0; p < k; ++p) {
    first[p] = h.num_vertices;
    h.num_vertices += size[p];
    for (std::size_t i = 0; i < size[p]; ++i) h.part.push_back(p);
  }
  auto digits = [&](VertexId v3) {
    std::vector<std::size_t> d(coords);
    std::size_t rest = v3;
    for (std::size_t i = 0; i < coords; ++i) {
      d[i] = coords == 1 ? rest : rest % radix;
      if (coords > 1) rest /= radix;
    }
    return d;
  };

  std::set<std::vector<std::size_t>> edges;
  for (auto [a, c] : g.e13) {
    std::vector<std::size_t> e{first[0] + a};
    auto d = digits(c);
    for (std::size_t i = 0; i < coords; ++i) e.push_back(first[2 + i] + d[i]);
    edges.insert(e);
  }
  for (auto [b, c] : g.e23) {
    std::vector<std::size_t> e{first[1] + b};
    auto d = digits(c);
    for (std::size_t i = 0; i < coords; ++i) e.push_back(first[2 + i] + d[i]);
    edges.insert(e);
  }
  // e12 edges skip one coordinate part and range over all values of the others.
  for (auto [a, b] : g.e12) {
    for (std::size_t skip = 0; skip < coords; ++skip) {
      std::vector<std::size_t> e{first[0] + a, first[1] + b};
      std::function<void(std::size_t)> fill = [&](std::size_t i) {
        if (i == coords) {
          edges.insert(e);
          return;
        }
        if (i == skip) {
          fill(i + 1);
          return;
        }
        for (std::size_t v = 0; v < radix; ++v) {
          e.push_back(first[2 + i] + v);
          fill(i + 1);
          e.pop_back();
        }
      };
      fill(0);
    }
  }
  h.edges.assign(edges.begin(), edges.end());
  return h;
}

HypercliqueSearch brute_force_hyperclique(const UniformHypergraph& h, std::size_t k) {
  if (k < 2) throw GraphError("hyperclique size must be at least 2");
  for (const auto& e : h.edges)
    if (e.size() != k - 1) throw GraphError("hypergraph is not (k-1)-uniform");
  std::set<std::vector<std::size_t>> edges(h.edges.begin(), h.edges.end());

  HypercliqueSearch out;
  std::vector<std::size_t> pick;
  std::vector<std::size_t> sub;
  auto all_faces = [&] {
    for (std::size_t drop = 0; drop < k; ++drop) {
      sub.clear();
      for (std::size_t i = 0; i < k; ++i)
        if (i != drop) sub.push_back(pick[i]);
      if (!edges.contains(sub)) return false;
    }
    return true;
  };
  std::function<void(std::size_t)> choose = [&](std::size_t from) {
    if (pick.size() == k) {
      if (all_faces()) {
        if (!out.first) out.first = pick;
        ++out.count;
      }
      return;
    }
    for (std::size_t v = from; v < h.num_vertices; ++v) {
      pick.push_back(v);
      choose(v + 1);
      pick.pop_back();
    }
  };
  choose(0);
  return out;
}

}  // namespace ucq
