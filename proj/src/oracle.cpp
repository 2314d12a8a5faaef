#include "ucqlab/oracle.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace ucq {

namespace {

struct CompiledAtom {
  const Relation* rel = nullptr;
  std::vector<int> var_at;       // variable index per position, -1 for constants
  std::vector<Value> const_at;   // constant value per position
};

// Returns false when some atom can never match (missing relation or constant).
bool compile(const ConjunctiveQuery& q, const Database& d, std::vector<CompiledAtom>& out) {
  for (const auto& atom : q.body()) {
    CompiledAtom c;
    c.rel = d.find(atom.relation);
    if (c.rel == nullptr || c.rel->arity() != atom.arity() || c.rel->empty()) return false;
    for (const auto& t : atom.args) {
      if (t.is_variable()) {
        c.var_at.push_back(static_cast<int>(q.require_index(t.text)));
        c.const_at.push_back(0);
      } else {
        auto v = d.pool().find(t.text);
        if (!v) return false;
        c.var_at.push_back(-1);
        c.const_at.push_back(*v);
      }
    }
    out.push_back(std::move(c));
  }
  return true;
}

class ComponentSearch {
 public:
  ComponentSearch(const std::vector<CompiledAtom>& atoms, std::vector<std::size_t> members,
                  std::size_t num_vars)
      : atoms_(atoms), assignment_(num_vars, 0) {
    order_atoms(std::move(members));
  }

  // Calls `leaf` with the full assignment of this component; stop when it returns false.
  void run(const std::function<bool(const std::vector<Value>&)>& leaf) {
    leaf_ = &leaf;
    stop_ = false;
    recurse(0);
  }

 private:
  struct Step {
    const CompiledAtom* atom;
    std::vector<std::size_t> key_positions;
    std::vector<std::size_t> new_positions;
    GroupIndex index;
  };

  void order_atoms(std::vector<std::size_t> pending) {
    VarMask bound = 0;
    while (!pending.empty()) {
      auto best = pending.begin();
      auto score = [&](std::size_t a) {
        int shared = 0;
        for (int v : atoms_[a].var_at)
          if (v >= 0 && contains(bound, static_cast<std::size_t>(v))) ++shared;
        return std::make_pair(shared, -static_cast<long>(atoms_[a].rel->size()));
      };
      for (auto it = pending.begin(); it != pending.end(); ++it)
        if (score(*it) > score(*best)) best = it;
      const CompiledAtom& a = atoms_[*best];
      Step step{&a, {}, {}, {}};
      VarMask fresh = 0;
      for (std::size_t p = 0; p < a.var_at.size(); ++p) {
        int v = a.var_at[p];
        if (v < 0 || contains(bound, static_cast<std::size_t>(v))) {
          step.key_positions.push_back(p);
        } else {
          step.new_positions.push_back(p);
          fresh |= bit(static_cast<std::size_t>(v));
        }
      }
      step.index = a.rel->index_on(step.key_positions);
      bound |= fresh;
      steps_.push_back(std::move(step));
      pending.erase(best);
    }
  }

  void recurse(std::size_t depth) {
    if (stop_) return;
    if (depth == steps_.size()) {
      if (!(*leaf_)(assignment_)) stop_ = true;
      return;
    }
    Step& s = steps_[depth];
    const CompiledAtom& a = *s.atom;
    Tuple key;
    key.reserve(s.key_positions.size());
    for (std::size_t p : s.key_positions)
      key.push_back(a.var_at[p] < 0 ? a.const_at[p] : assignment_[static_cast<std::size_t>(a.var_at[p])]);
    for (std::uint32_t r : s.index.lookup(key.data())) {
      const Value* row = a.rel->row(r);
      VarMask set_here = 0;
      bool ok = true;
      for (std::size_t p : s.new_positions) {
        auto v = static_cast<std::size_t>(a.var_at[p]);
        if (contains(set_here, v)) {
          ok = assignment_[v] == row[p];
          if (!ok) break;
        } else {
          assignment_[v] = row[p];
          set_here |= bit(v);
        }
      }
      if (ok) recurse(depth + 1);
      if (stop_) return;
    }
  }

  const std::vector<CompiledAtom>& atoms_;
  std::vector<Value> assignment_;
  std::vector<Step> steps_;
  const std::function<bool(const std::vector<Value>&)>* leaf_ = nullptr;
  bool stop_ = false;
};

std::vector<std::vector<std::size_t>> components(const std::vector<CompiledAtom>& atoms) {
  std::vector<std::size_t> parent(atoms.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> root = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = root(parent[x]);
  };
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (std::size_t j = i + 1; j < atoms.size(); ++j)
      for (int v : atoms[i].var_at)
        if (v >= 0 && std::find(atoms[j].var_at.begin(), atoms[j].var_at.end(), v) != atoms[j].var_at.end())
          parent[root(i)] = root(j);
  std::vector<std::vector<std::size_t>> out;
  std::vector<int> slot(atoms.size(), -1);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    std::size_t r = root(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[static_cast<std::size_t>(slot[r])].push_back(i);
  }
  return out;
}

}  // namespace

AnswerSet brute_force_answers(const ConjunctiveQuery& q, const Database& d) {
  std::vector<CompiledAtom> atoms;
  if (!compile(q, d, atoms)) return {};
  std::vector<std::size_t> head_index;
  for (const auto& v : q.head()) head_index.push_back(q.require_index(v));

  // Per component: the head positions it determines and its distinct projections.
  struct Part {
    std::vector<std::size_t> positions;
    std::set<Tuple> projections;
  };
  std::vector<Part> parts;
  for (auto& members : components(atoms)) {
    VarMask vars = 0;
    for (std::size_t a : members)
      for (int v : atoms[a].var_at)
        if (v >= 0) vars |= bit(static_cast<std::size_t>(v));
    Part part;
    for (std::size_t p = 0; p < head_index.size(); ++p)
      if (contains(vars, head_index[p])) part.positions.push_back(p);
    ComponentSearch search(atoms, members, q.num_variables());
    const bool boolean_part = part.positions.empty();
    search.run([&](const std::vector<Value>& assignment) {
      Tuple t;
      for (std::size_t p : part.positions) t.push_back(assignment[head_index[p]]);
      part.projections.insert(std::move(t));
      return !boolean_part;
    });
    if (part.projections.empty()) return {};
    parts.push_back(std::move(part));
  }

  AnswerSet out;
  Tuple answer(head_index.size());
  std::function<void(std::size_t)> combine = [&](std::size_t i) {
    if (i == parts.size()) {
      out.insert(answer);
      return;
    }
    for (const auto& proj : parts[i].projections) {
      for (std::size_t k = 0; k < proj.size(); ++k) answer[parts[i].positions[k]] = proj[k];
      combine(i + 1);
    }
  };
  combine(0);
  return out;
}

AnswerSet brute_force_answers(const UnionQuery& u, const Database& d) {
  AnswerSet out;
  const UnionQuery aligned = align_heads(u);
  for (const auto& q : aligned.disjuncts()) {
    auto part = brute_force_answers(q, d);
    out.insert(part.begin(), part.end());
  }
  return out;
}

bool has_homomorphism(const ConjunctiveQuery& q, const Database& d) {
  std::vector<CompiledAtom> atoms;
  if (!compile(q, d, atoms)) return false;
  for (auto& members : components(atoms)) {
    ComponentSearch search(atoms, members, q.num_variables());
    bool found = false;
    search.run([&](const std::vector<Value>&) {
      found = true;
      return false;
    });
    if (!found) return false;
  }
  return true;
}

AnswerSet exhaustive_answers(const ConjunctiveQuery& q, const Database& d) {
  std::vector<CompiledAtom> atoms;
  if (!compile(q, d, atoms)) return {};
  std::set<Value> domain_set;
  for (const auto& a : atoms)
    for (std::size_t r = 0; r < a.rel->size(); ++r)
      domain_set.insert(a.rel->row(r), a.rel->row(r) + a.rel->arity());
  std::vector<Value> domain(domain_set.begin(), domain_set.end());
  const std::size_t n = q.num_variables();
  std::vector<std::size_t> digit(n, 0);
  std::vector<Value> assignment(n);
  AnswerSet out;
  Tuple probe;
  while (true) {
    for (std::size_t i = 0; i < n; ++i) assignment[i] = domain[digit[i]];
    bool ok = true;
    for (const auto& a : atoms) {
      probe.clear();
      for (std::size_t p = 0; p < a.var_at.size(); ++p)
        probe.push_back(a.var_at[p] < 0 ? a.const_at[p] : assignment[static_cast<std::size_t>(a.var_at[p])]);
      if (!a.rel->contains(probe)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      Tuple t;
      for (const auto& v : q.head()) t.push_back(assignment[q.require_index(v)]);
      out.insert(std::move(t));
    }
    std::size_t i = 0;
    while (i < n && ++digit[i] == domain.size()) digit[i++] = 0;
    if (i == n) break;
  }
  return out;
}

}  // namespace ucq
