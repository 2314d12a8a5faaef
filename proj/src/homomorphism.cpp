#include "ucqlab/homomorphism.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "ucqlab/hypergraph.hpp"

namespace ucq {

std::vector<std::string> BodyHomomorphism::image(const std::vector<std::string>& vars) const {
  std::vector<std::string> out;
  for (const auto& v : vars) {
    const Term& t = mapping.at(v);
    if (t.is_variable() && std::find(out.begin(), out.end(), t.text) == out.end())
      out.push_back(t.text);
  }
  return out;
}

std::string BodyHomomorphism::to_string() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [from, to] : mapping) {
    out += (first ? "" : ", ") + from + "->" + (to.is_variable() ? to.text : "'" + to.text + "'");
    first = false;
  }
  return out + "}";
}

namespace {

using Mapping = std::map<std::string, Term>;

// Backtracking over atom-to-atom assignments. `visit` returns false to stop.
void search_homomorphisms(const ConjunctiveQuery& source, const ConjunctiveQuery& target,
                          Mapping initial, const std::function<bool(const Mapping&)>& visit) {
  const auto& atoms = source.body();
  std::vector<std::vector<const Atom*>> candidates(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (const auto& t : target.body())
      if (t.relation == atoms[i].relation && t.arity() == atoms[i].arity())
        candidates[i].push_back(&t);
    if (candidates[i].empty()) return;
  }
  // Most constrained atoms first.
  std::vector<std::size_t> order(atoms.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return candidates[a].size() < candidates[b].size();
  });

  Mapping m = std::move(initial);
  bool stop = false;
  std::function<void(std::size_t)> rec = [&](std::size_t depth) {
    if (stop) return;
    if (depth == order.size()) {
      if (!visit(m)) stop = true;
      return;
    }
    const Atom& a = atoms[order[depth]];
    for (const Atom* t : candidates[order[depth]]) {
      std::vector<std::string> bound;
      bool ok = true;
      for (std::size_t p = 0; p < a.arity() && ok; ++p) {
        const Term& from = a.args[p];
        const Term& to = t->args[p];
        if (from.is_constant()) {
          ok = to.is_constant() && to.text == from.text;
          continue;
        }
        auto it = m.find(from.text);
        if (it == m.end()) {
          m.emplace(from.text, to);
          bound.push_back(from.text);
        } else {
          ok = it->second == to;
        }
      }
      if (ok) rec(depth + 1);
      for (const auto& v : bound) m.erase(v);
      if (stop) return;
    }
  };
  rec(0);
}

}  // namespace

std::vector<BodyHomomorphism> body_homomorphisms(const ConjunctiveQuery& source,
                                                 const ConjunctiveQuery& target) {
  std::set<BodyHomomorphism> found;
  search_homomorphisms(source, target, {}, [&](const Mapping& m) {
    found.insert(BodyHomomorphism{m});
    return true;
  });
  return {found.begin(), found.end()};
}

bool is_contained(const ConjunctiveQuery& q1, const ConjunctiveQuery& q2) {
  if (q1.head().size() != q2.head().size()) {
    throw QueryError("containment needs equal head arities (" + q1.name() + ", " + q2.name() + ")");
  }
  Mapping initial;
  for (std::size_t p = 0; p < q2.head().size(); ++p)
    initial.emplace(q2.head()[p], Term::variable(q1.head()[p]));
  bool found = false;
  search_homomorphisms(q2, q1, initial, [&](const Mapping&) {
    found = true;
    return false;
  });
  return found;
}

UnionQuery make_non_redundant(const UnionQuery& u) {
  UnionQuery aligned = align_heads(u);
  std::vector<bool> keep(aligned.size(), true);
  for (std::size_t i = aligned.size(); i-- > 0;) {
    for (std::size_t j = 0; j < aligned.size(); ++j) {
      if (j == i || !keep[j]) continue;
      if (is_contained(aligned[i], aligned[j])) {
        keep[i] = false;
        break;
      }
    }
  }
  std::vector<ConjunctiveQuery> out;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (keep[i]) out.push_back(u[i]);
  return UnionQuery(std::move(out));
}

namespace {

// Subsets S of free(q2) making q2 S-connex. A free-connex q2 needs only free(q2).
std::vector<VarMask> connex_sets(const ConjunctiveQuery& q2) {
  const VarMask free = q2.free_mask();
  if (is_free_connex(q2)) return {free};
  Hypergraph h = hypergraph_of(q2);
  std::vector<VarMask> out;
  if (!is_acyclic(h)) return out;
  for (VarMask s = free;; s = (s - 1) & free) {
    if (is_s_connex(h, s)) out.push_back(s);
    if (s == 0) break;
  }
  // Smallest sets first so witnesses stay tight.
  std::stable_sort(out.begin(), out.end(),
                   [](VarMask a, VarMask b) { return popcount(a) < popcount(b); });
  return out;
}

VarMask image_mask(const ConjunctiveQuery& q1, const ConjunctiveQuery& q2,
                   const BodyHomomorphism& h, VarMask source) {
  VarMask out = 0;
  for_each_member(source, [&](std::size_t i) {
    const Term& t = h(q2.variables()[i]);
    if (t.is_variable()) out |= bit(q1.require_index(t.text));
  });
  return out;
}

bool maps_to_variables(const ConjunctiveQuery& q2, const BodyHomomorphism& h, VarMask source) {
  bool ok = true;
  for_each_member(source, [&](std::size_t i) { ok = ok && h(q2.variables()[i]).is_variable(); });
  return ok;
}

}  // namespace

std::vector<ProvidedSet> provided_sets(const ConjunctiveQuery& q1, const ConjunctiveQuery& q2) {
  std::vector<ProvidedSet> out;
  std::set<VarMask> seen;
  const auto connex = connex_sets(q2);
  const VarMask free = q2.free_mask();
  for (const auto& h : body_homomorphisms(q2, q1)) {
    for (VarMask v2 = free;; v2 = (v2 - 1) & free) {
      if (maps_to_variables(q2, h, v2)) {
        auto s = std::find_if(connex.begin(), connex.end(),
                              [&](VarMask c) { return is_subset(v2, c); });
        if (s != connex.end()) {
          VarMask target = image_mask(q1, q2, h, v2);
          if (seen.insert(target).second) {
            out.push_back({q1.names_of(target), h, q2.names_of(v2), q2.names_of(*s)});
          }
        }
      }
      if (v2 == 0) break;
    }
  }
  return out;
}

std::optional<ProvidedSet> find_provider(const ConjunctiveQuery& q1, const ConjunctiveQuery& q2,
                                         VarMask target) {
  const auto connex = connex_sets(q2);
  if (connex.empty()) return std::nullopt;
  for (const auto& h : body_homomorphisms(q2, q1)) {
    for (VarMask s : connex) {
      // V2 = every S-variable landing in the target; its image must be the whole target.
      VarMask v2 = 0;
      for_each_member(s, [&](std::size_t i) {
        const Term& t = h(q2.variables()[i]);
        if (t.is_variable() && contains(target, q1.require_index(t.text))) v2 |= bit(i);
      });
      if (image_mask(q1, q2, h, v2) == target) {
        return ProvidedSet{q1.names_of(target), h, q2.names_of(v2), q2.names_of(s)};
      }
    }
  }
  return std::nullopt;
}

bool provides(const ConjunctiveQuery& q2, const ConjunctiveQuery& q1, VarMask target) {
  return find_provider(q1, q2, target).has_value();
}

bool provides_structure(const ConjunctiveQuery& q2, const ConjunctiveQuery& q1,
                        const DifficultStructure& s) {
  return provides(q2, q1, variable_mask(q1, s));
}

VarMask free_image(const ConjunctiveQuery& q1, const ConjunctiveQuery& q2) {
  VarMask out = 0;
  for (const auto& h : body_homomorphisms(q2, q1)) out |= image_mask(q1, q2, h, q2.free_mask());
  return out;
}

bool body_isomorphic(const ConjunctiveQuery& a, const ConjunctiveQuery& b) {
  if (a.body().size() != b.body().size() || a.num_variables() != b.num_variables()) return false;
  auto bijective = [](const ConjunctiveQuery& from, const ConjunctiveQuery& to) {
    for (const auto& h : body_homomorphisms(from, to)) {
      std::set<std::string> image;
      bool vars_only = true;
      for (const auto& [v, t] : h.mapping) {
        vars_only = vars_only && t.is_variable();
        image.insert(t.text);
      }
      if (!vars_only || image.size() != from.num_variables()) continue;
      std::set<Atom> atoms;
      for (const auto& atom : from.body()) {
        Atom mapped{atom.relation, {}};
        for (const auto& t : atom.args) mapped.args.push_back(t.is_variable() ? h(t.text) : t);
        atoms.insert(mapped);
      }
      if (atoms.size() == to.body().size()) return true;
    }
    return false;
  };
  return bijective(a, b);
}

}  // namespace ucq
