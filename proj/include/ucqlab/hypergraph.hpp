#pragma once

#include <string>
#include <vector>

#include "ucqlab/query.hpp"
#include "ucqlab/varset.hpp"

namespace ucq {

struct Hypergraph {
  std::vector<std::string> vertex_names;
  std::vector<VarMask> edges;  // nonempty, pairwise distinct

  std::size_t num_vertices() const { return vertex_names.size(); }
  VarMask vertex_mask() const;
  VarMask neighbors(std::size_t v) const;  // excludes v itself
  bool adjacent(std::size_t u, std::size_t v) const;
  // True iff one edge contains every vertex of `set`.
  bool covered(VarMask set) const;
  Hypergraph with_edge(VarMask e) const;
};

// Drops empty edges and merges duplicates, keeping first-occurrence order.
Hypergraph make_hypergraph(std::vector<std::string> names, const std::vector<VarMask>& edges);
Hypergraph hypergraph_of(const ConjunctiveQuery& q);

// Nodes are the indices of the edge list handed to gyo(); parent[root] == -1.
struct JoinTree {
  std::vector<VarMask> node_sets;
  std::vector<int> parent;
  int root = -1;

  std::size_t size() const { return node_sets.size(); }
  std::vector<std::vector<std::size_t>> children() const;
  std::vector<std::size_t> preorder() const;
  std::vector<std::size_t> postorder() const;
};

struct GyoResult {
  bool acyclic = false;
  JoinTree tree;                  // meaningful when acyclic
  std::vector<VarMask> residue;   // irreducible remainder when cyclic
};

// GYO over an arbitrary edge list (duplicates and empty sets allowed).
// Ears are taken lowest index first; vertex elimination precedes each ear pass.
GyoResult gyo(const std::vector<VarMask>& edges);

GyoResult analyze_acyclicity(const Hypergraph& h);
bool is_acyclic(const Hypergraph& h);
bool is_acyclic(const ConjunctiveQuery& q);

bool has_running_intersection(const JoinTree& t);

bool is_s_connex(const Hypergraph& h, VarMask s);
bool is_s_connex(const ConjunctiveQuery& q, VarMask s);
bool is_s_connex(const ConjunctiveQuery& q, const std::vector<std::string>& s);
bool is_free_connex(const ConjunctiveQuery& q);

}  // namespace ucq
