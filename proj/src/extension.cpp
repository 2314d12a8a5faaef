#include "ucqlab/extension.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "ucqlab/hypergraph.hpp"

namespace ucq {

using nlohmann::json;

Atom VirtualAtom::atom() const {
  Atom a{symbol, {}};
  for (const auto& v : variables) a.args.push_back(Term::variable(v));
  return a;
}

ConjunctiveQuery ExtendedQuery::extended() const {
  if (virtual_atoms.empty()) return base;
  std::vector<Atom> extra;
  for (const auto& va : virtual_atoms) extra.push_back(va.atom());
  return base.with_atoms_appended(extra);
}

UnionQuery ResolvedUnion::as_union() const {
  std::vector<ConjunctiveQuery> qs;
  for (const auto& d : disjuncts) qs.push_back(d.extended());
  return UnionQuery(std::move(qs));
}

UnionQuery ResolvedUnion::original() const {
  std::vector<ConjunctiveQuery> qs;
  for (const auto& d : disjuncts) qs.push_back(d.base);
  return UnionQuery(std::move(qs));
}

ResolvedUnion resolve(const UnionQuery& u) {
  ResolvedUnion r;
  for (const auto& q : u.disjuncts()) r.disjuncts.push_back({q, {}});
  auto used_symbols = u.relation_symbols();
  std::set<std::string> used(used_symbols.begin(), used_symbols.end());
  std::size_t counter = 0;
  auto fresh = [&] {
    for (;;) {
      std::string s = "V_" + std::to_string(++counter);
      if (used.insert(s).second) return s;
    }
  };

  auto one_step = [&]() -> bool {
    for (std::size_t i = 0; i < r.disjuncts.size(); ++i) {
      const ConjunctiveQuery host = r.disjuncts[i].extended();
      for (const auto& s : find_difficult_structures(host)) {
        const VarMask target = variable_mask(host, s);
        for (std::size_t j = 0; j < u.size(); ++j) {
          if (j == i) continue;
          if (auto p = find_provider(host, u[j], target)) {
            r.disjuncts[i].virtual_atoms.push_back({fresh(), host.names_of(target), j, *p, s.to_string()});
            ++r.steps;
            return true;
          }
        }
      }
    }
    return false;
  };
  while (one_step()) {
  }
  return r;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kTractable: return "Tractable";
    case Verdict::kIntractable: return "IntractableUnderVUTD";
    case Verdict::kUnsupported: return "UnsupportedScope";
  }
  return "?";
}

namespace {

std::optional<ReductionPlan> accept(const ConjunctiveQuery& q1, const ConjunctiveQuery* partner,
                                    const std::vector<BodyHomomorphism>& homs, ReductionPlan plan) {
  if (verify_reduction_conditions(q1, partner, homs, plan).all()) return plan;
  return std::nullopt;
}

// Labels every variable with 0 (unused) or an X-set index 1..ell and keeps the first valid plan.
std::optional<ReductionPlan> exhaustive_plan(const ConjunctiveQuery& q1, const ConjunctiveQuery* partner,
                                             const std::vector<BodyHomomorphism>& homs) {
  constexpr std::size_t kMaxVariables = 8;
  const std::size_t n = q1.num_variables();
  if (n > kMaxVariables) return std::nullopt;
  for (std::size_t ell = 3; ell <= std::min<std::size_t>(4, n); ++ell) {
    std::vector<std::size_t> label(n, 0);
    for (;;) {
      ReductionPlan plan;
      plan.x_sets.assign(ell, {});
      for (std::size_t v = 0; v < n; ++v)
        if (label[v] > 0) plan.x_sets[label[v] - 1].push_back(q1.variables()[v]);
      bool nonempty = std::all_of(plan.x_sets.begin(), plan.x_sets.end(), [](const auto& x) { return !x.empty(); });
      if (nonempty) {
        plan.alpha_den = alpha_denominator(partner, ell);
        if (plan.x_sets.back().size() == 1) plan.unprovided = plan.x_sets.back().front();
        if (auto ok = accept(q1, partner, homs, plan)) return ok;
      }
      std::size_t pos = 0;
      while (pos < n && ++label[pos] > ell) label[pos++] = 0;
      if (pos == n) break;
    }
  }
  return std::nullopt;
}

json names_json(const std::vector<std::string>& xs) { return json(xs); }

std::string names_list(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + xs[i];
  return out;
}

json structures_json(const std::vector<DifficultStructure>& ss) {
  json out = json::array();
  for (const auto& s : ss) out.push_back(s.to_string());
  return out;
}

}  // namespace

std::optional<ReductionPlan> find_reduction_plan(const ConjunctiveQuery& q1, const ConjunctiveQuery* partner) {
  std::vector<BodyHomomorphism> homs;
  VarMask provided = 0;
  if (partner != nullptr) {
    homs = body_homomorphisms(*partner, q1);
    provided = free_image(q1, *partner);
  }
  auto unprovided = [&](const std::string& v) { return !contains(provided, q1.require_index(v)); };

  for (const auto& s : find_difficult_structures(q1)) {
    for (const auto& v : s.variables) {
      if (!unprovided(v)) continue;
      try {
        if (auto ok = accept(q1, partner, homs, choose_reduction_sets(q1, partner, s, v))) return ok;
      } catch (const ReductionError&) {
      }
    }
  }
  for (const auto& v : q1.variables()) {
    if (!unprovided(v)) continue;
    for (const auto& s : find_extended_structures(q1, v)) {
      try {
        if (auto ok = accept(q1, partner, homs, choose_reduction_sets(q1, partner, s, v))) return ok;
      } catch (const ReductionError&) {
      }
    }
  }
  return exhaustive_plan(q1, partner, homs);
}

Classification classify_union(const UnionQuery& u) {
  Classification c;
  const UnionQuery nr = make_non_redundant(align_heads(u));
  c.normalized = nr;
  c.resolved = resolve(nr);
  const auto& qs = nr.disjuncts();

  auto attach_plan = [&](std::size_t hard, const ConjunctiveQuery* partner) {
    c.hard_disjunct = hard;
    c.structures = find_difficult_structures(qs[hard]);
    c.remaining_structures = find_difficult_structures(c.resolved.disjuncts[hard].extended());
    c.plan = find_reduction_plan(qs[hard], partner);
    if (c.plan) c.conditions = verify_reduction_conditions(qs[hard], partner, *c.plan);
  };

  if (qs.size() > 2) {
    c.verdict = Verdict::kUnsupported;
    c.reason = "more-than-two-disjuncts";
    c.notes.push_back(std::to_string(qs.size()) + " disjuncts after removing redundant ones");
    throw UnsupportedScope("the classifier handles unions of at most two disjuncts", c);
  }

  if (qs.size() == 1) {
    if (is_free_connex(qs[0])) {
      c.verdict = Verdict::kTractable;
      c.reason = "free-connex";
      return c;
    }
    if (!is_self_join_free(qs[0])) {
      c.verdict = Verdict::kUnsupported;
      c.reason = "self-join-in-difficult-disjunct";
      throw UnsupportedScope("difficult disjunct " + qs[0].name() + " has self-joins", c);
    }
    c.verdict = Verdict::kIntractable;
    c.reason = "single-difficult-cq";
    attach_plan(0, nullptr);
    return c;
  }

  const UnionQuery extended = c.resolved.as_union();
  if (std::all_of(extended.disjuncts().begin(), extended.disjuncts().end(),
                  [](const ConjunctiveQuery& q) { return is_free_connex(q); })) {
    c.verdict = Verdict::kTractable;
    c.reason = c.resolved.steps == 0 ? "all-free-connex" : "free-connex-extension";
    return c;
  }

  std::vector<std::size_t> difficult;
  for (std::size_t i = 0; i < qs.size(); ++i)
    if (!is_free_connex(qs[i])) difficult.push_back(i);
  for (std::size_t i : difficult) {
    if (!is_self_join_free(qs[i])) {
      c.verdict = Verdict::kUnsupported;
      c.reason = "self-join-in-difficult-disjunct";
      c.hard_disjunct = i;
      throw UnsupportedScope("difficult disjunct " + qs[i].name() + " has self-joins", c);
    }
  }

  c.verdict = Verdict::kIntractable;
  if (difficult.size() == 1) {
    const std::size_t hard = difficult[0];
    attach_plan(hard, &qs[1 - hard]);
    c.reason = c.plan ? "unprovided-structure" : "no-reduction-plan";
    return c;
  }

  // Both disjuncts difficult.
  if (!(body_isomorphic(qs[0], qs[1]) && is_acyclic(qs[0]) && is_acyclic(qs[1]))) {
    c.reason = "not-body-isomorphic";
    c.notes.push_back("two difficult disjuncts that are not body-isomorphic and acyclic");
    attach_plan(0, &qs[1]);
    if (!c.plan) attach_plan(1, &qs[0]);
    return c;
  }
  attach_plan(0, &qs[1]);
  if (!c.plan) attach_plan(1, &qs[0]);
  c.reason = c.plan ? "unprovided-structure" : "no-reduction-plan";
  if (!c.plan) c.notes.push_back("resolution left a difficult structure but no reduction plan was found");
  return c;
}

json plan_to_json(const ReductionPlan& plan) {
  json sets = json::array();
  for (const auto& x : plan.x_sets) sets.push_back(names_json(x));
  json out{{"x_sets", sets}, {"alpha", "1/" + std::to_string(plan.alpha_den)}, {"source", plan.source_text()}};
  if (!plan.unprovided.empty()) out["unprovided"] = plan.unprovided;
  return out;
}

json conditions_to_json(const ConditionReport& r) {
  json out{{"well_formed", r.well_formed},
           {"cond1_no_atom_meets_all_sets", r.no_atom_meets_all},
           {"cond2_sets_connected", r.sets_connected},
           {"cond3_connectors", r.connectors_exist},
           {"cond4_partner_bounded", r.partner_bounded},
           {"free_connector_used", r.free_connector_used},
           {"post_check", {{"e12", r.post_check[kEdge12]}, {"e13", r.post_check[kEdge13]}, {"e23", r.post_check[kEdge23]}}}};
  if (!r.problem.empty()) out["problem"] = r.problem;
  return out;
}

json Classification::to_json() const {
  json out;
  out["verdict"] = verdict_name(verdict);
  out["reason"] = reason;
  if (normalized) {
    json ds = json::array();
    for (const auto& q : normalized->disjuncts()) ds.push_back(print_query(q));
    out["disjuncts"] = ds;
  }
  json atoms = json::array();
  json extended = json::array();
  for (std::size_t i = 0; i < resolved.disjuncts.size(); ++i) {
    const auto& d = resolved.disjuncts[i];
    extended.push_back(print_query(d.extended()));
    for (const auto& va : d.virtual_atoms) {
      atoms.push_back({{"host", i},
                       {"symbol", va.symbol},
                       {"variables", va.variables},
                       {"provider", va.provider},
                       {"motivation", va.motivation},
                       {"homomorphism", va.provenance.witness_hom.to_string()},
                       {"v2", va.provenance.witness_v2},
                       {"s", va.provenance.witness_s}});
    }
  }
  out["resolution"] = {{"steps", resolved.steps}, {"virtual_atoms", atoms}, {"extended", extended}};
  if (hard_disjunct) out["hard_disjunct"] = *hard_disjunct;
  out["structures"] = structures_json(structures);
  out["remaining_structures"] = structures_json(remaining_structures);
  if (plan) {
    out["witness"] = plan_to_json(*plan);
    if (!plan->unprovided.empty()) out["unprovided"] = plan->unprovided;
  }
  if (conditions) out["conditions"] = conditions_to_json(*conditions);
  out["notes"] = notes;
  return out;
}

std::string Classification::explain() const {
  std::ostringstream os;
  os << "verdict: " << verdict_name(verdict) << " (" << reason << ")\n";
  if (normalized) {
    os << "normalized union:\n";
    for (const auto& q : normalized->disjuncts()) os << "  " << print_query(q) << "\n";
  }
  os << "resolution steps: " << resolved.steps << "\n";
  for (const auto& d : resolved.disjuncts)
    for (const auto& va : d.virtual_atoms)
      os << "  " << d.base.name() << " += " << va.symbol << "(" << names_list(va.variables) << ") on "
         << va.motivation << " via disjunct " << va.provider << " " << va.provenance.witness_hom.to_string() << "\n";
  if (hard_disjunct) {
    os << "hard disjunct: " << *hard_disjunct << "\n";
    if (!structures.empty()) os << "structures:\n" << structure_report(structures);
    if (!remaining_structures.empty()) os << "after resolution:\n" << structure_report(remaining_structures);
  }
  if (plan) {
    os << "reduction plan from " << plan->source_text() << ":";
    for (std::size_t i = 0; i < plan->x_sets.size(); ++i) {
      os << " X" << i + 1 << "={";
      for (std::size_t j = 0; j < plan->x_sets[i].size(); ++j) os << (j ? "," : "") << plan->x_sets[i][j];
      os << "}";
    }
    os << " alpha=1/" << plan->alpha_den << "\n";
  }
  for (const auto& n : notes) os << "note: " << n << "\n";
  return os.str();
}

}  // namespace ucq
