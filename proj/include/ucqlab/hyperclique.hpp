#pragma once

#include <optional>
#include <vector>

#include "ucqlab/tripartite.hpp"

namespace ucq {

// Vertex-labeled uniform hypergraph; edges are sorted vertex lists.
struct UniformHypergraph {
  std::size_t num_vertices = 0;
  std::size_t uniformity = 0;
  std::vector<std::size_t> part;               // part label per vertex (0-based)
  std::vector<std::vector<std::size_t>> edges;  // sorted, deduplicated
};

// Parts U1 = V1, U2 = V2 and V3 spread over U3..Uk as base-r digits,
// r = ceil(|V3|^(1/(k-2))). One edge per e13/e23 edge; e12 edges are repeated over
// every choice of the k-3 coordinates they skip. k-hypercliques match triangles.
UniformHypergraph hyperclique_encode(const TripartiteGraph& g, std::size_t k);

struct HypercliqueSearch {
  std::optional<std::vector<std::size_t>> first;
  std::size_t count = 0;
};

// Every k-subset whose (k-1)-subsets are all edges; needs a (k-1)-uniform input.
HypercliqueSearch brute_force_hyperclique(const UniformHypergraph& h, std::size_t k);

}  // namespace ucq
