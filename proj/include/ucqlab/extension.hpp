#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "ucqlab/homomorphism.hpp"
#include "ucqlab/query.hpp"
#include "ucqlab/reduction.hpp"
#include "ucqlab/structures.hpp"

namespace ucq {

// An atom over a fresh relation symbol, justified by another disjunct providing its variables.
struct VirtualAtom {
  std::string symbol;
  std::vector<std::string> variables;  // in the host disjunct's variable order
  std::size_t provider = 0;            // index of the providing disjunct
  ProvidedSet provenance;
  std::string motivation;              // structure that triggered the step

  Atom atom() const;
};

struct ExtendedQuery {
  ConjunctiveQuery base;
  std::vector<VirtualAtom> virtual_atoms;

  ConjunctiveQuery extended() const;
};

struct ResolvedUnion {
  std::vector<ExtendedQuery> disjuncts;
  std::size_t steps = 0;

  UnionQuery as_union() const;  // extended disjuncts
  UnionQuery original() const;  // base disjuncts
};

// Adds virtual atoms on provided difficult structures until none is left to add.
// Structures are visited per disjunct in canonical order, providers in index order.
ResolvedUnion resolve(const UnionQuery& u);

enum class Verdict { kTractable, kIntractable, kUnsupported };
const char* verdict_name(Verdict v);

struct Classification {
  Verdict verdict = Verdict::kUnsupported;
  std::string reason;
  std::optional<UnionQuery> normalized;
  ResolvedUnion resolved;
  std::optional<std::size_t> hard_disjunct;
  std::vector<DifficultStructure> structures;            // of the hard disjunct, before resolution
  std::vector<DifficultStructure> remaining_structures;  // after resolution
  std::optional<ReductionPlan> plan;
  std::optional<ConditionReport> conditions;
  std::vector<std::string> notes;

  nlohmann::json to_json() const;
  std::string explain() const;
};

// Raised for inputs outside the two-disjunct, self-join-free scope; carries the partial report.
class UnsupportedScope : public std::runtime_error {
 public:
  UnsupportedScope(const std::string& what, Classification report)
      : std::runtime_error(what), report_(std::move(report)) {}
  const Classification& report() const { return report_; }

 private:
  Classification report_;
};

Classification classify_union(const UnionQuery& u);

// First plan satisfying all four conditions for hard disjunct `q1` against `partner`:
// original structures first, then extended structures, then exhaustive X-set search.
std::optional<ReductionPlan> find_reduction_plan(const ConjunctiveQuery& q1, const ConjunctiveQuery* partner);

nlohmann::json plan_to_json(const ReductionPlan& plan);
nlohmann::json conditions_to_json(const ConditionReport& r);

}  // namespace ucq
