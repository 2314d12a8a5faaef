#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ucq {

using VertexId = std::uint32_t;
using Edge = std::pair<VertexId, VertexId>;

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Vertices are 0-based ids within each part. e12 ⊆ V1×V2, e23 ⊆ V2×V3, e13 ⊆ V1×V3.
struct TripartiteGraph {
  std::size_t n1 = 0, n2 = 0, n3 = 0;
  std::vector<Edge> e12, e23, e13;

  // Sorts and deduplicates; throws GraphError on out-of-range endpoints.
  void normalize();
  std::size_t num_edges() const { return e12.size() + e23.size() + e13.size(); }
  friend bool operator==(const TripartiteGraph&, const TripartiteGraph&) = default;
};

struct Triangle {
  VertexId v1, v2, v3;
  auto operator<=>(const Triangle&) const = default;
};

// Text format: `parts n1 n2 n3`, then `e12 u v` / `e23 u v` / `e13 u v`; `#` starts a comment.
TripartiteGraph read_graph(std::istream& in);
TripartiteGraph read_graph(const std::filesystem::path& path);
void write_graph(std::ostream& out, const TripartiteGraph& g);
void write_graph(const std::filesystem::path& path, const TripartiteGraph& g);

// Every possible edge present independently with probability p.
TripartiteGraph random_graph(std::size_t n1, std::size_t n2, std::size_t n3, double p, std::mt19937_64& rng);
// Random graph plus one triangle on random vertices (all parts must be nonempty).
TripartiteGraph planted_triangle_graph(std::size_t n1, std::size_t n2, std::size_t n3, double p,
                                       std::mt19937_64& rng);
// Random graph with one edge of every triangle removed until none is left.
TripartiteGraph triangle_free_graph(std::size_t n1, std::size_t n2, std::size_t n3, double p,
                                    std::mt19937_64& rng);

struct TriangleSearch {
  std::optional<Triangle> first;
  std::size_t count = 0;
};

// Triple loop over V1×V2×V3 with adjacency matrices.
TriangleSearch triangle_brute_force(const TripartiteGraph& g);
// Joins e12 with e23 on V2 and probes e13; stops at the first hit.
std::optional<Triangle> triangle_detect_2path(const TripartiteGraph& g);
// Same join without early exit; sorted.
std::vector<Triangle> triangle_list(const TripartiteGraph& g);

// A subgraph with the ids it was renumbered from: original = local + offset.
struct GraphBlock {
  TripartiteGraph graph;
  VertexId offset1 = 0, offset2 = 0, offset3 = 0;

  Triangle to_original(const Triangle& t) const {
    return {t.v1 + offset1, t.v2 + offset2, t.v3 + offset3};
  }
};

// Cuts V3 into consecutive blocks of ceil(n^(alpha/beta)) vertices, n = |V3|.
// Requires |V1| = |V2| and 0 < alpha <= beta <= 1.
std::vector<GraphBlock> split_v3(const TripartiteGraph& g, double alpha, double beta);
// Grid over V1×V2 with cells of side at most `block`; V3 kept whole.
std::vector<GraphBlock> split_v1v2(const TripartiteGraph& g, std::size_t block);

}  // namespace ucq
