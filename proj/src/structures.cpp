#include "ucqlab/structures.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace ucq {

const char* kind_name(StructureKind k) {
  switch (k) {
    case StructureKind::kFreePath: return "FreePath";
    case StructureKind::kChordlessCycle: return "Cycle";
    case StructureKind::kTetra: return "Tetra";
  }
  return "?";
}

const char* kind_name(ExtendedKind k) {
  switch (k) {
    case ExtendedKind::kHandFan: return "HandFan";
    case ExtendedKind::kFreeHandFan: return "FreeHandFan";
    case ExtendedKind::kFlower: return "Flower";
    case ExtendedKind::kAlmostTetra: return "AlmostTetra";
  }
  return "?";
}

namespace {

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + xs[i];
  return out;
}

// Shared search state: primal-graph neighborhoods and name ranks.
struct Search {
  const Hypergraph& h;
  std::vector<VarMask> nbr;
  std::vector<std::size_t> rank;

  explicit Search(const Hypergraph& hg) : h(hg), nbr(hg.num_vertices()), rank(hg.num_vertices()) {
    for (std::size_t v = 0; v < hg.num_vertices(); ++v) nbr[v] = hg.neighbors(v);
    std::vector<std::size_t> order(hg.num_vertices());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return hg.vertex_names[a] < hg.vertex_names[b];
    });
    for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;
  }

  using StepOk = std::function<bool(std::size_t, std::size_t)>;
  using VertexOk = std::function<bool(std::size_t)>;

  // Chordless paths; `stop_at_end` ends a branch as soon as an endpoint is reached.
  void paths(VarMask allowed, const StepOk& step_ok, const VertexOk& start_ok,
             const VertexOk& interior_ok, const VertexOk& end_ok, std::size_t min_len,
             std::vector<VertexList>& out) const {
    VertexList path;
    std::function<void(VarMask)> dfs = [&](VarMask on_path) {
      std::size_t last = path.back();
      for (std::size_t w : members(nbr[last] & allowed & ~on_path)) {
        if (!step_ok(last, w)) continue;
        if (nbr[w] & (on_path & ~bit(last))) continue;
        path.push_back(w);
        if (end_ok(w) && path.size() >= min_len && rank[path.front()] < rank[w]) out.push_back(path);
        if (interior_ok(w)) dfs(on_path | bit(w));
        path.pop_back();
      }
    };
    for (std::size_t s : members(allowed)) {
      if (!start_ok(s)) continue;
      path = {s};
      dfs(bit(s));
    }
  }

  void cycles(VarMask allowed, const StepOk& step_ok, std::vector<VertexList>& out) const {
    VertexList path;
    for (std::size_t s : members(allowed)) {
      VarMask above = 0;
      for (std::size_t v : members(allowed))
        if (rank[v] > rank[s]) above |= bit(v);
      std::function<void(VarMask)> dfs = [&](VarMask on_path) {
        std::size_t last = path.back();
        for (std::size_t w : members(nbr[last] & above & ~on_path)) {
          if (!step_ok(last, w)) continue;
          if (nbr[w] & (on_path & ~bit(last) & ~bit(s))) continue;
          if (path.size() >= 2 && contains(nbr[w], s)) {
            VarMask all = on_path | bit(w);
            if (step_ok(w, s) && !h.covered(all) && rank[path[1]] < rank[w]) {
              path.push_back(w);
              out.push_back(path);
              path.pop_back();
            }
            continue;
          }
          path.push_back(w);
          dfs(on_path | bit(w));
          path.pop_back();
        }
      };
      path = {s};
      dfs(bit(s));
    }
  }

  // Every clique of the primal graph inside `allowed` that contains `required`.
  void cliques(VarMask allowed, VarMask required, std::size_t min_size,
               const std::function<void(VarMask)>& visit) const {
    std::function<void(VarMask, VarMask)> rec = [&](VarMask clique, VarMask cand) {
      if (static_cast<std::size_t>(popcount(clique)) >= min_size && is_subset(required, clique)) {
        visit(clique);
      }
      for (std::size_t w : members(cand)) {
        VarMask later = w + 1 >= kMaxVariables ? 0 : cand & (~VarMask{0} << (w + 1));
        rec(clique | bit(w), later & nbr[w]);
      }
    };
    rec(0, allowed);
  }
};

bool is_tetra(const Hypergraph& h, VarMask set) {
  if (h.covered(set)) return false;
  for (std::size_t u : members(set))
    if (!h.covered(set & ~bit(u))) return false;
  return true;
}

std::vector<std::string> names(const Hypergraph& h, const VertexList& vs) {
  std::vector<std::string> out;
  for (std::size_t v : vs) out.push_back(h.vertex_names[v]);
  return out;
}

VertexList sorted_by_name(const Hypergraph& h, VarMask set) {
  VertexList vs = members(set);
  std::sort(vs.begin(), vs.end(),
            [&](std::size_t a, std::size_t b) { return h.vertex_names[a] < h.vertex_names[b]; });
  return vs;
}

}  // namespace

std::string DifficultStructure::to_string() const {
  return std::string(kind_name(kind)) + "(" + join(variables) + ")";
}

std::string ExtendedStructure::to_string() const {
  std::string out = kind_name(kind);
  out += "(";
  if (center) out += "center=" + *center + "; ";
  return out + join(variables) + ")";
}

std::vector<VertexList> find_s_paths(const Hypergraph& h, VarMask s) {
  Search search(h);
  std::vector<VertexList> out;
  auto in_s = [&](std::size_t v) { return contains(s, v); };
  auto out_s = [&](std::size_t v) { return !contains(s, v); };
  search.paths(h.vertex_mask(), [](std::size_t, std::size_t) { return true; }, in_s, out_s, in_s,
               3, out);
  return out;
}

std::vector<VertexList> find_chordless_cycles(const Hypergraph& h) {
  Search search(h);
  std::vector<VertexList> out;
  search.cycles(h.vertex_mask(), [](std::size_t, std::size_t) { return true; }, out);
  return out;
}

std::vector<VertexList> find_tetras(const Hypergraph& h, std::size_t min_size) {
  Search search(h);
  std::vector<VertexList> out;
  search.cliques(h.vertex_mask(), 0, min_size, [&](VarMask c) {
    if (is_tetra(h, c)) out.push_back(members(c));
  });
  return out;
}

bool is_cyclic_by_definition(const Hypergraph& h) {
  return !find_chordless_cycles(h).empty() || !find_tetras(h, 3).empty();
}

bool is_s_connex_by_paths(const Hypergraph& h, VarMask s) {
  return !is_cyclic_by_definition(h) && find_s_paths(h, s).empty();
}

bool canonical_less(const DifficultStructure& a, const DifficultStructure& b) {
  if (a.variables.size() != b.variables.size()) return a.variables.size() < b.variables.size();
  if (a.kind != b.kind) return a.kind < b.kind;
  return a.variables < b.variables;
}

std::vector<DifficultStructure> find_difficult_structures(const ConjunctiveQuery& q) {
  Hypergraph h = hypergraph_of(q);
  std::vector<DifficultStructure> out;
  for (const auto& p : find_s_paths(h, q.free_mask()))
    out.push_back({StructureKind::kFreePath, names(h, p)});
  for (const auto& c : find_chordless_cycles(h))
    out.push_back({StructureKind::kChordlessCycle, names(h, c)});
  for (const auto& t : find_tetras(h, 4)) {
    VarMask m = 0;
    for (std::size_t v : t) m |= bit(v);
    out.push_back({StructureKind::kTetra, names(h, sorted_by_name(h, m))});
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

std::vector<ExtendedStructure> find_extended_structures(const ConjunctiveQuery& q,
                                                        const std::string& v) {
  Hypergraph h = hypergraph_of(q);
  const std::size_t center = q.require_index(v);
  const VarMask free = q.free_mask();
  Search search(h);
  std::vector<ExtendedStructure> out;
  const VarMask others = h.vertex_mask() & ~bit(center);
  auto fan_step = [&](std::size_t a, std::size_t b) {
    return h.covered(bit(center) | bit(a) | bit(b));
  };

  std::vector<VertexList> fans;
  auto is_free = [&](std::size_t u) { return contains(free, u); };
  auto is_bound = [&](std::size_t u) { return !contains(free, u); };
  search.paths(others, fan_step, is_free, is_bound, is_free, 3, fans);
  for (const auto& p : fans) out.push_back({ExtendedKind::kFreeHandFan, v, names(h, p)});

  std::vector<VertexList> flowers;
  search.cycles(others, fan_step, flowers);
  for (const auto& c : flowers) out.push_back({ExtendedKind::kFlower, v, names(h, c)});

  search.cliques(h.vertex_mask(), bit(center), 4, [&](VarMask c) {
    if (h.covered(c)) return;
    for (std::size_t u : members(c & ~bit(center)))
      if (!h.covered(c & ~bit(u))) return;
    VertexList order = sorted_by_name(h, c & ~bit(center));
    order.push_back(center);
    out.push_back({ExtendedKind::kAlmostTetra, std::nullopt, names(h, order)});
  });
  return out;
}

std::vector<ExtendedStructure> find_hand_fans(const ConjunctiveQuery& q, const std::string& v) {
  Hypergraph h = hypergraph_of(q);
  const std::size_t center = q.require_index(v);
  Search search(h);
  std::vector<VertexList> fans;
  auto any = [](std::size_t) { return true; };
  search.paths(
      h.vertex_mask() & ~bit(center),
      [&](std::size_t a, std::size_t b) { return h.covered(bit(center) | bit(a) | bit(b)); }, any,
      any, any, 3, fans);
  std::vector<ExtendedStructure> out;
  for (const auto& p : fans) out.push_back({ExtendedKind::kHandFan, v, names(h, p)});
  return out;
}

VarMask variable_mask(const ConjunctiveQuery& q, const DifficultStructure& s) {
  return q.mask_of(s.variables);
}

VarMask variable_mask(const ConjunctiveQuery& q, const ExtendedStructure& s) {
  VarMask m = q.mask_of(s.variables);
  if (s.center) m |= bit(q.require_index(*s.center));
  return m;
}

std::string structure_report(const std::vector<DifficultStructure>& structures) {
  std::string out;
  for (const auto& s : structures) out += std::string(kind_name(s.kind)) + " " + join(s.variables) + "\n";
  return out;
}

}  // namespace ucq
