#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ucqlab/database.hpp"
#include "ucqlab/query.hpp"
#include "ucqlab/stream.hpp"
#include "ucqlab/tripartite.hpp"

namespace ucq::testing {

using Rng = std::mt19937_64;
using Row = std::vector<std::string>;
using RowSet = std::set<Row>;

struct CqShape {
  std::size_t max_atoms = 5;
  std::size_t max_arity = 3;
  std::size_t max_variables = 6;
  std::size_t relations = 4;     // symbols R0..R{n-1}
  double constant_rate = 0.0;    // chance that an argument is a constant
  std::size_t constants = 3;     // constants c0..c{n-1}
  bool self_join_free = true;    // distinct symbols within a disjunct
};

// Random safe CQ; relation arities are fixed per symbol through `arity`.
ConjunctiveQuery random_cq(Rng& rng, const CqShape& shape, std::map<std::string, std::size_t>& arity,
                           const std::string& name = "Q");

// Two or more disjuncts over shared relation arities and a shared head-variable set.
UnionQuery random_union(Rng& rng, const CqShape& shape, std::size_t disjuncts);

// Two disjuncts where the second reuses a subset of the first's atoms with some
// variables renamed to head variables, so it tends to provide the first's
// difficult structures. Missing head variables land in fresh-symbol atoms.
UnionQuery random_provider_union(Rng& rng, const CqShape& shape);

// Every relation of `u` filled with random tuples over constants c0..c{domain-1}.
Database random_database(Rng& rng, const UnionQuery& u, std::size_t domain, std::size_t max_tuples);

// Literal answer semantics: every assignment of var(q) to the active domain plus
// the query's constants, kept when every atom's image is a stored tuple.
RowSet literal_answers(const ConjunctiveQuery& q, const Database& d);
// Union: each disjunct's answers reordered to the first disjunct's head.
RowSet literal_answers(const UnionQuery& u, const Database& d);

// Acyclicity by repeatedly deleting lonely vertices and contained edges, on plain sets.
bool naive_acyclic(std::vector<std::set<int>> edges);
bool naive_free_connex(const ConjunctiveQuery& q);

std::size_t naive_triangle_count(const TripartiteGraph& g);

// Drains a stream, flagging repeated answers.
std::vector<Row> drain_unique(AnswerStream& s, const Database& d, bool* duplicates);

Row decode(const Database& d, const Tuple& t);
RowSet decode_all(const Database& d, const std::set<Tuple>& ts);

std::string source_path(const std::string& relative);

}  // namespace ucq::testing
