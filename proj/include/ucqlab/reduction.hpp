#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ucqlab/database.hpp"
#include "ucqlab/homomorphism.hpp"
#include "ucqlab/query.hpp"
#include "ucqlab/structures.hpp"
#include "ucqlab/tripartite.hpp"

namespace ucq {

class ReductionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using PlanSource = std::variant<std::monostate, DifficultStructure, ExtendedStructure>;

// Disjoint variable sets X_1..X_l of the hard disjunct that drive the triangle encoding.
struct ReductionPlan {
  std::vector<std::vector<std::string>> x_sets;
  std::size_t alpha_den = 1;  // alpha = 1 / alpha_den; recorded, not used for sizing
  PlanSource source;          // monostate when found by exhaustive search
  std::string unprovided;     // the single variable of X_l when the plan came from a structure

  std::size_t ell() const { return x_sets.size(); }
  double alpha() const { return 1.0 / static_cast<double>(alpha_den); }
  std::string source_text() const;
};

// X-sets for a structure and an unprovided variable v. `partner`, when given,
// fixes alpha and is used to reject a provided v.
ReductionPlan choose_reduction_sets(const ConjunctiveQuery& q1, const ConjunctiveQuery* partner,
                                    const DifficultStructure& s, const std::string& v);
ReductionPlan choose_reduction_sets(const ConjunctiveQuery& q1, const ConjunctiveQuery* partner,
                                    const ExtendedStructure& s, const std::string& v);

std::size_t alpha_denominator(const ConjunctiveQuery* partner, std::size_t ell);

// Edge sets in the order 12, 13, 23.
enum EdgeSet : std::size_t { kEdge12 = 0, kEdge13 = 1, kEdge23 = 2 };

struct ConditionReport {
  bool well_formed = false;
  std::string problem;  // why the plan is malformed
  bool no_atom_meets_all = false;      // every atom misses some X_i
  bool sets_connected = false;         // each X_i induces a connected primal subgraph
  bool connectors_exist = false;       // every edge set has a connector
  bool partner_bounded = false;        // the partner's free variables hit X_l at most once
  bool free_connector_used = false;
  std::array<bool, 3> post_check{};    // edge sets connected only through free(Q1)

  bool all() const {
    return well_formed && no_atom_meets_all && sets_connected && connectors_exist && partner_bounded;
  }
};

// Checks the four conditions literally; `partner` absent means the last one holds vacuously.
ConditionReport verify_reduction_conditions(const ConjunctiveQuery& q1, const ConjunctiveQuery* partner,
                                            const ReductionPlan& plan);
// Same, with the partner's body-homomorphisms into q1 precomputed.
ConditionReport verify_reduction_conditions(const ConjunctiveQuery& q1, const ConjunctiveQuery* partner,
                                            const std::vector<BodyHomomorphism>& homs,
                                            const ReductionPlan& plan);

// A database encoding `g` into q1's relations. Values are tagged "<variable>:<payload>"
// so that answers of different disjuncts cannot collide.
struct ReductionInstance {
  Database database;
  std::vector<std::string> head;
  std::vector<int> head_set;         // X-set index of each head variable, -1 if none
  std::array<bool, 3> post_check{};
  std::size_t ell = 0;
  std::size_t radix = 1;             // |U_3| = ... = |U_{l-1}|
  std::size_t top = 0;               // |U_l|
  TripartiteGraph graph;

  // True iff `answer` (decoded strings, head order) came from q1 and passes the edge post-check.
  bool is_witness(const std::vector<std::string>& answer) const;
  bool is_witness(const Tuple& answer) const { return is_witness(database.decode(answer)); }
};

ReductionInstance build_reduction_database(const ConjunctiveQuery& q1, const ReductionPlan& plan,
                                           const TripartiteGraph& g);

std::string tagged_value(const std::string& variable, const std::string& payload);
inline const char* kBottom = "⊥";

}  // namespace ucq
