#include "ucqlab/reduction.hpp"

#include <algorithm>
#include <functional>

#include "ucqlab/homomorphism.hpp"

namespace ucq {

namespace {

void reject_provided(const ConjunctiveQuery& q1, const ConjunctiveQuery* partner, const std::string& v) {
  if (!q1.index_of(v)) throw ReductionError("variable " + v + " does not occur in " + q1.name());
  if (partner != nullptr && contains(free_image(q1, *partner), q1.require_index(v))) {
    throw ReductionError("variable " + v + " is provided by " + partner->name());
  }
}

std::vector<std::vector<std::string>> singletons_with_last(std::vector<std::string> vars, const std::string& v) {
  auto it = std::find(vars.begin(), vars.end(), v);
  if (it == vars.end()) throw ReductionError("variable " + v + " is not part of the structure");
  vars.erase(it);
  vars.push_back(v);
  std::vector<std::vector<std::string>> out;
  for (auto& x : vars) out.push_back({x});
  return out;
}

std::vector<std::string> slice(const std::vector<std::string>& xs, std::size_t from, std::size_t to) {
  return {xs.begin() + static_cast<std::ptrdiff_t>(from), xs.begin() + static_cast<std::ptrdiff_t>(to)};
}

ReductionPlan finish(const ConjunctiveQuery* partner, std::vector<std::vector<std::string>> sets,
                     PlanSource source, const std::string& v) {
  ReductionPlan plan;
  plan.alpha_den = alpha_denominator(partner, sets.size());
  plan.x_sets = std::move(sets);
  plan.source = std::move(source);
  plan.unprovided = v;
  return plan;
}

}  // namespace

std::string ReductionPlan::source_text() const {
  if (auto* d = std::get_if<DifficultStructure>(&source)) return d->to_string();
  if (auto* e = std::get_if<ExtendedStructure>(&source)) return e->to_string();
  return "search";
}

std::size_t alpha_denominator(const ConjunctiveQuery* partner, std::size_t ell) {
  std::size_t free2 = partner != nullptr ? partner->head().size() : 0;
  return std::max<std::size_t>({free2, ell >= 2 ? ell - 2 : 1, 1});
}

std::string tagged_value(const std::string& variable, const std::string& payload) {
  return variable + ":" + payload;
}

ReductionPlan choose_reduction_sets(const ConjunctiveQuery& q1, const ConjunctiveQuery* partner,
                                    const DifficultStructure& s, const std::string& v) {
  reject_provided(q1, partner, v);
  const auto& xs = s.variables;
  auto pos = std::find(xs.begin(), xs.end(), v);
  if (pos == xs.end()) throw ReductionError("variable " + v + " is not part of " + s.to_string());
  const std::size_t i = static_cast<std::size_t>(pos - xs.begin());
  const std::size_t k = xs.size();

  switch (s.kind) {
    case StructureKind::kTetra:
      return finish(partner, singletons_with_last(xs, v), s, v);
    case StructureKind::kChordlessCycle: {
      std::vector<std::string> rot;  // rotation ending at v, same direction
      for (std::size_t j = 1; j <= k; ++j) rot.push_back(xs[(i + j) % k]);
      return finish(partner, {slice(rot, 0, k - 2), {rot[k - 2]}, {v}}, s, v);
    }
    case StructureKind::kFreePath: {
      if (i == 0 || i + 1 == k) {
        std::vector<std::string> path = xs;
        if (i == 0) std::reverse(path.begin(), path.end());
        return finish(partner, {{path.front()}, slice(path, 1, k - 1), {v}}, s, v);
      }
      return finish(partner, {slice(xs, 0, i), slice(xs, i + 1, k), {v}}, s, v);
    }
  }
  throw ReductionError("unknown structure kind");
}

ReductionPlan choose_reduction_sets(const ConjunctiveQuery& q1, const ConjunctiveQuery* partner,
                                    const ExtendedStructure& s, const std::string& v) {
  reject_provided(q1, partner, v);
  const auto& u = s.variables;
  const std::size_t k = u.size();
  switch (s.kind) {
    case ExtendedKind::kFreeHandFan:
    case ExtendedKind::kFlower: {
      if (s.center != v) throw ReductionError(v + " is not the center of " + s.to_string());
      if (k < 3) throw ReductionError("structure too short: " + s.to_string());
      if (s.kind == ExtendedKind::kFreeHandFan) {
        return finish(partner, {{u.front()}, {u.back()}, slice(u, 1, k - 1), {v}}, s, v);
      }
      return finish(partner, {{u[0]}, {u[1]}, slice(u, 2, k), {v}}, s, v);
    }
    case ExtendedKind::kAlmostTetra:
      if (u.empty() || u.back() != v) throw ReductionError(v + " is not the last vertex of " + s.to_string());
      return finish(partner, singletons_with_last(u, v), s, v);
    case ExtendedKind::kHandFan:
      break;
  }
  throw ReductionError("no X-set rule for " + s.to_string());
}

ConditionReport verify_reduction_conditions(const ConjunctiveQuery& q1, const ConjunctiveQuery* partner,
                                            const ReductionPlan& plan) {
  std::vector<BodyHomomorphism> homs;
  if (partner != nullptr) homs = body_homomorphisms(*partner, q1);
  return verify_reduction_conditions(q1, partner, homs, plan);
}

ConditionReport verify_reduction_conditions(const ConjunctiveQuery& q1, const ConjunctiveQuery* partner,
                                            const std::vector<BodyHomomorphism>& homs,
                                            const ReductionPlan& plan) {
  ConditionReport r;
  const std::size_t ell = plan.ell();
  std::vector<VarMask> sets;
  VarMask seen = 0;
  if (ell < 3) r.problem = "fewer than three X-sets";
  for (const auto& x : plan.x_sets) {
    if (!r.problem.empty()) break;
    if (x.empty()) {
      r.problem = "empty X-set";
      break;
    }
    VarMask m = 0;
    for (const auto& var : x) {
      auto idx = q1.index_of(var);
      if (!idx) {
        r.problem = "unknown variable " + var;
        break;
      }
      m |= bit(*idx);
    }
    if (m & seen) r.problem = "X-sets overlap";
    seen |= m;
    sets.push_back(m);
  }
  if (!r.problem.empty()) return r;
  r.well_formed = true;

  const std::size_t atoms = q1.body().size();
  r.no_atom_meets_all = true;
  for (std::size_t a = 0; a < atoms; ++a) {
    bool misses = std::any_of(sets.begin(), sets.end(), [&](VarMask x) { return (x & q1.atom_mask(a)) == 0; });
    if (!misses) r.no_atom_meets_all = false;
  }

  r.sets_connected = true;
  for (VarMask x : sets) {
    VarMask reached = bit(static_cast<std::size_t>(std::countr_zero(x)));
    for (bool grew = true; grew;) {
      grew = false;
      for (std::size_t a = 0; a < atoms; ++a) {
        VarMask am = q1.atom_mask(a);
        if ((am & reached) && ((am & x) & ~reached)) {
          reached |= am & x;
          grew = true;
        }
      }
    }
    if (reached != x) r.sets_connected = false;
  }

  std::vector<VarMask> connectors;
  for (std::size_t a = 0; a < atoms; ++a) connectors.push_back(q1.atom_mask(a));
  const VarMask free1 = q1.free_mask();
  const bool free_allowed = std::any_of(sets.begin(), sets.end(), [&](VarMask x) { return (x & free1) == 0; });
  auto meets_all = [&](VarMask v, const std::vector<std::size_t>& which) {
    return std::all_of(which.begin(), which.end(), [&](std::size_t i) { return (v & sets[i]) != 0; });
  };
  std::vector<std::size_t> rest;
  for (std::size_t i = 2; i < ell; ++i) rest.push_back(i);
  std::array<std::vector<std::size_t>, 3> groups{std::vector<std::size_t>{0, 1}, rest, rest};
  groups[kEdge13].insert(groups[kEdge13].begin(), 0);
  groups[kEdge23].insert(groups[kEdge23].begin(), 1);
  r.connectors_exist = true;
  for (std::size_t e = 0; e < 3; ++e) {
    bool by_atom = std::any_of(connectors.begin(), connectors.end(),
                               [&](VarMask v) { return meets_all(v, groups[e]); });
    if (by_atom) continue;
    if (free_allowed && meets_all(free1, groups[e])) {
      r.post_check[e] = true;
      r.free_connector_used = true;
    } else {
      r.connectors_exist = false;
    }
  }

  r.partner_bounded = true;
  if (partner != nullptr) {
    VarMask others = 0;
    for (std::size_t i = 0; i + 1 < ell; ++i) others |= sets[i];
    for (const auto& h : homs) {
      std::size_t in_last = 0, in_others = 0;
      for (const auto& f : partner->head()) {
        const Term& t = h(f);
        if (!t.is_variable()) continue;
        std::size_t idx = q1.require_index(t.text);
        if (contains(sets.back(), idx)) ++in_last;
        if (contains(others, idx)) ++in_others;
      }
      if (in_last > 0 && (in_last != 1 || in_others > ell - 2)) r.partner_bounded = false;
    }
  }
  return r;
}

ReductionInstance build_reduction_database(const ConjunctiveQuery& q1, const ReductionPlan& plan,
                                           const TripartiteGraph& g) {
  ConditionReport report = verify_reduction_conditions(q1, nullptr, plan);
  if (!report.well_formed) throw ReductionError("malformed plan: " + report.problem);
  if (!(report.no_atom_meets_all && report.sets_connected && report.connectors_exist)) {
    throw ReductionError("plan violates the encoding conditions");
  }
  if (!is_self_join_free(q1)) throw ReductionError("the encoded query must be self-join-free");

  ReductionInstance inst;
  inst.graph = g;
  inst.graph.normalize();
  inst.ell = plan.ell();
  inst.head = q1.head();
  inst.post_check = report.post_check;
  const std::size_t ell = inst.ell;
  inst.radix = std::max<std::size_t>({g.n1, g.n2, 1});
  std::size_t low = 1;  // r^(l-3)
  for (std::size_t i = 3; i < ell; ++i) low *= inst.radix;
  inst.top = (g.n3 + low - 1) / low;

  std::vector<int> set_of(q1.num_variables(), -1);
  for (std::size_t i = 0; i < ell; ++i)
    for (const auto& var : plan.x_sets[i]) set_of[q1.require_index(var)] = static_cast<int>(i);
  for (const auto& var : inst.head) inst.head_set.push_back(set_of[q1.require_index(var)]);

  std::vector<std::size_t> domain(ell, inst.radix);
  domain[0] = g.n1;
  domain[1] = g.n2;
  domain[ell - 1] = inst.top;
  auto v3_digits = [&](VertexId v3, std::vector<std::size_t>& coord) {
    std::size_t rest = v3;
    for (std::size_t i = 2; i + 1 < ell; ++i) {
      coord[i] = rest % inst.radix;
      rest /= inst.radix;
    }
    coord[ell - 1] = rest;
  };

  Database& db = inst.database;
  for (const auto& atom : q1.body()) {
    Relation& rel = db.add_relation(atom.relation, atom.arity());
    VarMask used = 0;  // X-set indices present in this atom
    for (const auto& t : atom.args)
      if (t.is_variable() && set_of[q1.require_index(t.text)] >= 0)
        used |= bit(static_cast<std::size_t>(set_of[q1.require_index(t.text)]));
    auto has = [&](std::size_t i) { return contains(used, i); };
    bool all_rest = true;
    for (std::size_t i = 2; i < ell; ++i) all_rest = all_rest && has(i);

    // Pre-intern the per-position value names lazily.
    std::vector<std::string> row(atom.arity());
    auto emit = [&](const std::vector<std::size_t>& coord) {
      for (std::size_t p = 0; p < atom.arity(); ++p) {
        const Term& t = atom.args[p];
        if (t.is_constant()) {
          row[p] = t.text;
          continue;
        }
        int s = set_of[q1.require_index(t.text)];
        row[p] = tagged_value(t.text, s < 0 ? std::string(kBottom) : std::to_string(coord[static_cast<std::size_t>(s)]));
      }
      rel.insert(db.intern_tuple(row));
    };
    // Cartesian fill over every used set not fixed by `fixed`.
    std::vector<std::size_t> coord(ell, 0);
    std::function<void(std::size_t, VarMask)> fill = [&](std::size_t i, VarMask fixed) {
      if (i == ell) {
        emit(coord);
        return;
      }
      if (!has(i) || contains(fixed, i)) {
        fill(i + 1, fixed);
        return;
      }
      for (std::size_t val = 0; val < domain[i]; ++val) {
        coord[i] = val;
        fill(i + 1, fixed);
      }
    };
    VarMask rest_mask = 0;
    for (std::size_t i = 2; i < ell; ++i) rest_mask |= bit(i);

    if (has(0) && has(1)) {
      for (auto [a, b] : inst.graph.e12) {
        coord[0] = a;
        coord[1] = b;
        fill(0, bit(0) | bit(1));
      }
    } else if (has(0) && all_rest) {
      for (auto [a, c] : inst.graph.e13) {
        coord[0] = a;
        v3_digits(c, coord);
        fill(0, bit(0) | rest_mask);
      }
    } else if (has(1) && all_rest) {
      for (auto [b, c] : inst.graph.e23) {
        coord[1] = b;
        v3_digits(c, coord);
        fill(0, bit(1) | rest_mask);
      }
    } else {
      fill(0, 0);
    }
  }
  return inst;
}

bool ReductionInstance::is_witness(const std::vector<std::string>& answer) const {
  if (answer.size() != head.size()) return false;
  std::vector<long long> coord(ell, -1);
  for (std::size_t p = 0; p < head.size(); ++p) {
    const std::string prefix = head[p] + ":";
    if (answer[p].compare(0, prefix.size(), prefix) != 0) return false;
    if (head_set[p] < 0) continue;
    const std::string payload = answer[p].substr(prefix.size());
    try {
      coord[static_cast<std::size_t>(head_set[p])] = std::stoll(payload);
    } catch (const std::exception&) {
      return false;
    }
  }
  if (!post_check[kEdge12] && !post_check[kEdge13] && !post_check[kEdge23]) return true;

  auto v3 = [&]() -> long long {
    long long value = 0, scale = 1;
    for (std::size_t i = 2; i < ell; ++i) {
      if (coord[i] < 0) return -1;
      value += coord[i] * scale;
      if (i + 1 < ell) scale *= static_cast<long long>(radix);
    }
    return value;
  };
  auto has_edge = [](const std::vector<Edge>& edges, long long a, long long b) {
    if (a < 0 || b < 0) return false;
    return std::binary_search(edges.begin(), edges.end(),
                              Edge{static_cast<VertexId>(a), static_cast<VertexId>(b)});
  };
  if (post_check[kEdge12] && !has_edge(graph.e12, coord[0], coord[1])) return false;
  if (post_check[kEdge13] && !has_edge(graph.e13, coord[0], v3())) return false;
  if (post_check[kEdge23] && !has_edge(graph.e23, coord[1], v3())) return false;
  return true;
}

}  // namespace ucq
