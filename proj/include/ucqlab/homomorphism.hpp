#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ucqlab/query.hpp"
#include "ucqlab/structures.hpp"

namespace ucq {

// Source variables to target terms; constants map to themselves implicitly.
struct BodyHomomorphism {
  std::map<std::string, Term> mapping;

  const Term& operator()(const std::string& var) const { return mapping.at(var); }
  // Target variables hit by the given source variables (constant images skipped).
  std::vector<std::string> image(const std::vector<std::string>& vars) const;
  std::string to_string() const;

  auto operator<=>(const BodyHomomorphism&) const = default;
};

std::vector<BodyHomomorphism> body_homomorphisms(const ConjunctiveQuery& source,
                                                 const ConjunctiveQuery& target);

// Q1 ⊆ Q2: some homomorphism from q2 to q1 sends q2's head onto q1's head positionwise.
bool is_contained(const ConjunctiveQuery& q1, const ConjunctiveQuery& q2);

// Drops disjuncts contained in another remaining one, scanning from the back so
// that among equivalent disjuncts the earliest survives.
UnionQuery make_non_redundant(const UnionQuery& u);

struct ProvidedSet {
  std::vector<std::string> target_vars;  // in Q1, ordered by Q1's variable order
  BodyHomomorphism witness_hom;          // from Q2 to Q1
  std::vector<std::string> witness_v2;   // ⊆ free(Q2), ordered by Q2's variable order
  std::vector<std::string> witness_s;    // V2 ⊆ S ⊆ free(Q2), Q2 is S-connex
};

// Every set V1 that q2 provides to q1 (downward closed; one witness per set).
std::vector<ProvidedSet> provided_sets(const ConjunctiveQuery& q1, const ConjunctiveQuery& q2);

// A witness that q2 provides exactly `target` (a set of q1 variables), if any.
std::optional<ProvidedSet> find_provider(const ConjunctiveQuery& q1, const ConjunctiveQuery& q2,
                                         VarMask target);

bool provides(const ConjunctiveQuery& q2, const ConjunctiveQuery& q1, VarMask target);
bool provides_structure(const ConjunctiveQuery& q2, const ConjunctiveQuery& q1,
                        const DifficultStructure& s);

// Union over body-homomorphisms h of h(free(q2)), as a mask over q1's variables.
VarMask free_image(const ConjunctiveQuery& q1, const ConjunctiveQuery& q2);

// Some bijective body-homomorphism in each direction exists (renaming of bodies).
bool body_isomorphic(const ConjunctiveQuery& a, const ConjunctiveQuery& b);

}  // namespace ucq
