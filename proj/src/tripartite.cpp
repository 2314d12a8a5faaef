#include "ucqlab/tripartite.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_set>

namespace ucq {

namespace {

void sort_unique(std::vector<Edge>& edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

void check_range(const std::vector<Edge>& edges, std::size_t na, std::size_t nb, const char* label) {
  for (auto [a, b] : edges) {
    if (a >= na || b >= nb) {
      throw GraphError(std::string(label) + " edge (" + std::to_string(a) + "," + std::to_string(b) +
                       ") outside the declared parts");
    }
  }
}

std::uint64_t pair_key(VertexId a, VertexId b) { return (std::uint64_t{a} << 32) | b; }

// Edges grouped by their first endpoint.
std::vector<std::vector<VertexId>> adjacency(const std::vector<Edge>& edges, std::size_t n) {
  std::vector<std::vector<VertexId>> adj(n);
  for (auto [a, b] : edges) adj[a].push_back(b);
  return adj;
}

template <typename Visit>
void for_each_triangle(const TripartiteGraph& g, Visit&& visit) {
  auto by_v2 = adjacency(g.e23, g.n2);
  std::unordered_set<std::uint64_t> e13;
  e13.reserve(g.e13.size() * 2);
  for (auto [a, c] : g.e13) e13.insert(pair_key(a, c));
  for (auto [a, b] : g.e12) {
    for (VertexId c : by_v2[b]) {
      if (e13.contains(pair_key(a, c)) && !visit(Triangle{a, b, c})) return;
    }
  }
}

void add_random_edges(std::vector<Edge>& out, std::size_t na, std::size_t nb, double p,
                      std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  for (VertexId a = 0; a < na; ++a)
    for (VertexId b = 0; b < nb; ++b)
      if (coin(rng)) out.emplace_back(a, b);
}

}  // namespace

void TripartiteGraph::normalize() {
  check_range(e12, n1, n2, "e12");
  check_range(e23, n2, n3, "e23");
  check_range(e13, n1, n3, "e13");
  sort_unique(e12);
  sort_unique(e23);
  sort_unique(e13);
}

TripartiteGraph read_graph(std::istream& in) {
  TripartiteGraph g;
  bool have_parts = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string tag;
    if (!(fields >> tag)) continue;
    auto fail = [&](const std::string& why) {
      throw GraphError("graph line " + std::to_string(line_no) + ": " + why);
    };
    if (tag == "parts") {
      if (have_parts) fail("duplicate parts header");
      if (!(fields >> g.n1 >> g.n2 >> g.n3)) fail("expected three part sizes");
      have_parts = true;
    } else if (tag == "e12" || tag == "e23" || tag == "e13") {
      if (!have_parts) fail("edge before the parts header");
      long long u = -1, v = -1;
      if (!(fields >> u >> v) || u < 0 || v < 0) fail("expected two non-negative vertex ids");
      auto& target = tag == "e12" ? g.e12 : tag == "e23" ? g.e23 : g.e13;
      target.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
    } else {
      fail("unknown record '" + tag + "'");
    }
    std::string extra;
    if (fields >> extra) fail("trailing field '" + extra + "'");
  }
  if (!have_parts) throw GraphError("graph has no parts header");
  g.normalize();
  return g;
}

TripartiteGraph read_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open graph file " + path.string());
  return read_graph(in);
}

void write_graph(std::ostream& out, const TripartiteGraph& g) {
  out << "parts " << g.n1 << ' ' << g.n2 << ' ' << g.n3 << '\n';
  for (auto [a, b] : g.e12) out << "e12 " << a << ' ' << b << '\n';
  for (auto [a, b] : g.e23) out << "e23 " << a << ' ' << b << '\n';
  for (auto [a, b] : g.e13) out << "e13 " << a << ' ' << b << '\n';
}

void write_graph(const std::filesystem::path& path, const TripartiteGraph& g) {
  std::ofstream out(path);
  if (!out) throw GraphError("cannot write graph file " + path.string());
  write_graph(out, g);
}

TripartiteGraph random_graph(std::size_t n1, std::size_t n2, std::size_t n3, double p, std::mt19937_64& rng) {
  TripartiteGraph g{n1, n2, n3, {}, {}, {}};
  add_random_edges(g.e12, n1, n2, p, rng);
  add_random_edges(g.e23, n2, n3, p, rng);
  add_random_edges(g.e13, n1, n3, p, rng);
  g.normalize();
  return g;
}

TripartiteGraph planted_triangle_graph(std::size_t n1, std::size_t n2, std::size_t n3, double p,
                                       std::mt19937_64& rng) {
  if (n1 == 0 || n2 == 0 || n3 == 0) throw GraphError("planting a triangle needs three nonempty parts");
  TripartiteGraph g = random_graph(n1, n2, n3, p, rng);
  auto pick = [&](std::size_t n) {
    return static_cast<VertexId>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
  };
  VertexId a = pick(n1), b = pick(n2), c = pick(n3);
  g.e12.emplace_back(a, b);
  g.e23.emplace_back(b, c);
  g.e13.emplace_back(a, c);
  g.normalize();
  return g;
}

TripartiteGraph triangle_free_graph(std::size_t n1, std::size_t n2, std::size_t n3, double p,
                                    std::mt19937_64& rng) {
  TripartiteGraph g = random_graph(n1, n2, n3, p, rng);
  while (auto t = triangle_detect_2path(g)) {
    auto it = std::lower_bound(g.e13.begin(), g.e13.end(), Edge{t->v1, t->v3});
    g.e13.erase(it);
  }
  return g;
}

TriangleSearch triangle_brute_force(const TripartiteGraph& g) {
  std::vector<char> a12(g.n1 * g.n2, 0), a23(g.n2 * g.n3, 0), a13(g.n1 * g.n3, 0);
  for (auto [a, b] : g.e12) a12[a * g.n2 + b] = 1;
  for (auto [b, c] : g.e23) a23[b * g.n3 + c] = 1;
  for (auto [a, c] : g.e13) a13[a * g.n3 + c] = 1;
  TriangleSearch out;
  for (VertexId a = 0; a < g.n1; ++a)
    for (VertexId b = 0; b < g.n2; ++b)
      for (VertexId c = 0; c < g.n3; ++c)
        if (a12[a * g.n2 + b] && a23[b * g.n3 + c] && a13[a * g.n3 + c]) {
          if (!out.first) out.first = Triangle{a, b, c};
          ++out.count;
        }
  return out;
}

std::optional<Triangle> triangle_detect_2path(const TripartiteGraph& g) {
  std::optional<Triangle> found;
  for_each_triangle(g, [&](const Triangle& t) {
    found = t;
    return false;
  });
  return found;
}

std::vector<Triangle> triangle_list(const TripartiteGraph& g) {
  std::vector<Triangle> out;
  for_each_triangle(g, [&](const Triangle& t) {
    out.push_back(t);
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<GraphBlock> split_v3(const TripartiteGraph& g, double alpha, double beta) {
  if (!(alpha > 0 && alpha <= beta && beta <= 1)) {
    throw GraphError("split_v3 needs 0 < alpha <= beta <= 1");
  }
  if (g.n1 != g.n2) throw GraphError("split_v3 needs |V1| = |V2|");
  const std::size_t n = g.n3;
  std::size_t size = n == 0 ? 1
                            : static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), alpha / beta) - 1e-9));
  size = std::clamp<std::size_t>(size, 1, std::max<std::size_t>(n, 1));
  const std::size_t blocks = n == 0 ? 1 : (n + size - 1) / size;

  std::vector<GraphBlock> out(blocks);
  for (std::size_t i = 0; i < blocks; ++i) {
    GraphBlock& blk = out[i];
    blk.offset3 = static_cast<VertexId>(i * size);
    blk.graph.n1 = g.n1;
    blk.graph.n2 = g.n2;
    blk.graph.n3 = std::min(size, n - std::min(n, i * size));
    blk.graph.e12 = g.e12;
  }
  for (auto [b, c] : g.e23) out[c / size].graph.e23.emplace_back(b, c - out[c / size].offset3);
  for (auto [a, c] : g.e13) out[c / size].graph.e13.emplace_back(a, c - out[c / size].offset3);
  return out;
}

std::vector<GraphBlock> split_v1v2(const TripartiteGraph& g, std::size_t block) {
  if (block == 0) throw GraphError("split_v1v2 needs a positive block size");
  const std::size_t rows = std::max<std::size_t>(1, (g.n1 + block - 1) / block);
  const std::size_t cols = std::max<std::size_t>(1, (g.n2 + block - 1) / block);
  std::vector<GraphBlock> out(rows * cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      GraphBlock& blk = out[r * cols + c];
      blk.offset1 = static_cast<VertexId>(r * block);
      blk.offset2 = static_cast<VertexId>(c * block);
      blk.graph.n1 = std::min(block, g.n1 - std::min(g.n1, r * block));
      blk.graph.n2 = std::min(block, g.n2 - std::min(g.n2, c * block));
      blk.graph.n3 = g.n3;
    }
  for (auto [a, b] : g.e12) {
    GraphBlock& blk = out[(a / block) * cols + b / block];
    blk.graph.e12.emplace_back(a - blk.offset1, b - blk.offset2);
  }
  for (auto [a, v3] : g.e13)
    for (std::size_t c = 0; c < cols; ++c) {
      GraphBlock& blk = out[(a / block) * cols + c];
      blk.graph.e13.emplace_back(a - blk.offset1, v3);
    }
  for (auto [b, v3] : g.e23)
    for (std::size_t r = 0; r < rows; ++r) {
      GraphBlock& blk = out[r * cols + b / block];
      blk.graph.e23.emplace_back(b - blk.offset2, v3);
    }
  return out;
}

}  // namespace ucq
