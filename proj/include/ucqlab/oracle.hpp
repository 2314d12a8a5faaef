#pragma once

#include <set>

#include "ucqlab/database.hpp"
#include "ucqlab/query.hpp"

namespace ucq {

using AnswerSet = std::set<Tuple>;

// Reference evaluation by homomorphism search: atoms are matched one at a time
// against the raw relations (hash lookups on already-bound columns), independent
// components are searched separately and combined by product. Shares no code
// with the join-tree engine.
AnswerSet brute_force_answers(const ConjunctiveQuery& q, const Database& d);
// Union answers follow the first disjunct's head order.
AnswerSet brute_force_answers(const UnionQuery& u, const Database& d);

// Literal active-domain enumeration of every variable assignment. Exponential in
// the number of variables; only for tiny instances (cross-checks the oracle above).
AnswerSet exhaustive_answers(const ConjunctiveQuery& q, const Database& d);

// Does the body map homomorphically into d (head ignored)?
bool has_homomorphism(const ConjunctiveQuery& q, const Database& d);

}  // namespace ucq
