#include "support.hpp"

#include <algorithm>
#include <functional>

namespace ucq::testing {

ConjunctiveQuery random_cq(Rng& rng, const CqShape& shape, std::map<std::string, std::size_t>& arity,
                           const std::string& name) {
  auto uniform = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  const std::size_t atoms =
      uniform(1, shape.self_join_free ? std::min(shape.max_atoms, shape.relations) : shape.max_atoms);
  const std::size_t vars = uniform(1, shape.max_variables);
  std::vector<std::size_t> symbols(shape.relations);
  for (std::size_t i = 0; i < symbols.size(); ++i) symbols[i] = i;
  std::shuffle(symbols.begin(), symbols.end(), rng);
  std::vector<Atom> body;
  for (std::size_t a = 0; a < atoms; ++a) {
    const std::size_t symbol = shape.self_join_free ? symbols[a % symbols.size()] : uniform(0, shape.relations - 1);
    std::string rel = "R" + std::to_string(symbol);
    auto [it, fresh] = arity.emplace(rel, uniform(1, shape.max_arity));
    Atom atom{rel, {}};
    for (std::size_t p = 0; p < it->second; ++p) {
      if (shape.constant_rate > 0 && std::bernoulli_distribution(shape.constant_rate)(rng)) {
        atom.args.push_back(Term::constant("c" + std::to_string(uniform(0, shape.constants - 1))));
      } else {
        atom.args.push_back(Term::variable("x" + std::to_string(uniform(0, vars - 1))));
      }
    }
    body.push_back(atom);
  }
  std::set<std::string> present;
  for (const auto& a : body)
    for (const auto& t : a.args)
      if (t.is_variable()) present.insert(t.text);
  if (present.empty()) {
    body[0].args[0] = Term::variable("x0");
    present.insert("x0");
  }
  std::vector<std::string> head;
  for (const auto& v : present)
    if (std::bernoulli_distribution(0.5)(rng)) head.push_back(v);
  std::shuffle(head.begin(), head.end(), rng);
  return ConjunctiveQuery(name, head, body);
}

UnionQuery random_union(Rng& rng, const CqShape& shape, std::size_t disjuncts) {
  for (;;) {
    std::map<std::string, std::size_t> arity;
    std::vector<ConjunctiveQuery> qs{random_cq(rng, shape, arity, "Q1")};
    const auto head = qs[0].head();
    bool ok = true;
    for (std::size_t i = 1; i < disjuncts && ok; ++i) {
      // Retry until the disjunct mentions every head variable.
      ok = false;
      for (int attempt = 0; attempt < 50 && !ok; ++attempt) {
        ConjunctiveQuery q = random_cq(rng, shape, arity, "Q" + std::to_string(i + 1));
        const auto& vs = q.variables();
        if (!std::all_of(head.begin(), head.end(),
                         [&](const std::string& h) { return std::find(vs.begin(), vs.end(), h) != vs.end(); })) {
          continue;
        }
        auto h2 = head;
        std::shuffle(h2.begin(), h2.end(), rng);
        qs.push_back(q.with_head(h2));
        ok = true;
      }
    }
    if (ok) return UnionQuery(qs);
  }
}

namespace {
UnionQuery provider_union_attempt(Rng& rng, const CqShape& shape);
}

UnionQuery random_provider_union(Rng& rng, const CqShape& shape) {
  for (;;) {
    UnionQuery u = provider_union_attempt(rng, shape);
    if (!naive_free_connex(u[0])) return u;
  }
}

namespace {
UnionQuery provider_union_attempt(Rng& rng, const CqShape& shape) {
  auto uniform = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  // Provider: every variable free.
  std::map<std::string, std::size_t> arity;
  ConjunctiveQuery base = random_cq(rng, shape, arity, "Q2");
  const std::vector<std::string> vars = base.variables();
  base = base.with_head(vars);
  // Host: some provider variables replaced by fresh existentials inside the copied
  // atoms, and kept free through one extra atom each.
  std::vector<std::string> demoted;
  for (const auto& v : vars)
    if (std::bernoulli_distribution(0.4)(rng)) demoted.push_back(v);
  if (demoted.empty()) demoted.push_back(vars[uniform(0, vars.size() - 1)]);
  std::vector<Atom> body;
  for (const auto& a : base.body()) {
    Atom copy = a;
    for (auto& t : copy.args) {
      auto it = std::find(demoted.begin(), demoted.end(), t.text);
      if (t.is_variable() && it != demoted.end()) t.text = "z" + std::to_string(it - demoted.begin());
    }
    body.push_back(copy);
  }
  for (std::size_t i = 0; i < demoted.size(); ++i) {
    Atom anchor{"A" + std::to_string(i), {Term::variable(demoted[i])}};
    // Tie the anchor to another head variable sometimes.
    if (vars.size() > 1 && std::bernoulli_distribution(0.8)(rng)) {
      const std::string& other = vars[uniform(0, vars.size() - 1)];
      if (other != demoted[i]) anchor.args.push_back(Term::variable(other));
    }
    body.push_back(anchor);
  }
  auto head = vars;
  std::shuffle(head.begin(), head.end(), rng);
  return UnionQuery({ConjunctiveQuery("Q1", head, body), base});
}
}  // namespace

Database random_database(Rng& rng, const UnionQuery& u, std::size_t domain, std::size_t max_tuples) {
  Database d;
  std::map<std::string, std::size_t> arity;
  for (const auto& q : u.disjuncts())
    for (const auto& a : q.body()) arity.emplace(a.relation, a.arity());
  std::uniform_int_distribution<std::size_t> value(0, domain - 1), count(0, max_tuples);
  for (const auto& [rel, k] : arity) {
    d.add_relation(rel, k);
    const std::size_t n = count(rng);
    for (std::size_t i = 0; i < n; ++i) {
      Row row(k);
      for (auto& x : row) x = "c" + std::to_string(value(rng));
      d.insert(rel, row);
    }
  }
  return d;
}

RowSet literal_answers(const ConjunctiveQuery& q, const Database& d) {
  std::set<std::string> domain_set;
  std::map<std::string, std::set<Row>> stored;
  for (const auto& [name, rel] : d.relations()) {
    for (std::size_t i = 0; i < rel.size(); ++i) {
      Row row = d.decode(rel.tuple(i));
      domain_set.insert(row.begin(), row.end());
      stored[name].insert(row);
    }
  }
  for (const auto& a : q.body())
    for (const auto& t : a.args)
      if (t.is_constant()) domain_set.insert(t.text);
  const std::vector<std::string> domain(domain_set.begin(), domain_set.end());
  const auto& vars = q.variables();
  std::map<std::string, std::string> assignment;
  RowSet out;
  std::function<void(std::size_t)> assign = [&](std::size_t i) {
    if (i == vars.size()) {
      for (const auto& a : q.body()) {
        Row image;
        for (const auto& t : a.args) image.push_back(t.is_constant() ? t.text : assignment.at(t.text));
        auto it = stored.find(a.relation);
        if (it == stored.end() || !it->second.contains(image)) return;
      }
      Row answer;
      for (const auto& h : q.head()) answer.push_back(assignment.at(h));
      out.insert(answer);
      return;
    }
    for (const auto& value : domain) {
      assignment[vars[i]] = value;
      assign(i + 1);
    }
  };
  assign(0);
  return out;
}

RowSet literal_answers(const UnionQuery& u, const Database& d) {
  RowSet out;
  const auto& head = u.head();
  for (const auto& q : u.disjuncts()) {
    std::vector<std::size_t> perm;
    for (const auto& h : head)
      perm.push_back(static_cast<std::size_t>(std::find(q.head().begin(), q.head().end(), h) - q.head().begin()));
    for (const auto& row : literal_answers(q, d)) {
      Row r;
      for (std::size_t p : perm) r.push_back(row[p]);
      out.insert(r);
    }
  }
  return out;
}

bool naive_acyclic(std::vector<std::set<int>> edges) {
  for (bool changed = true; changed;) {
    changed = false;
    // A vertex in a single edge disappears.
    std::map<int, int> occurrences;
    for (const auto& e : edges)
      for (int v : e) ++occurrences[v];
    for (auto& e : edges)
      for (auto it = e.begin(); it != e.end();) {
        if (occurrences[*it] == 1) {
          it = e.erase(it);
          changed = true;
        } else {
          ++it;
        }
      }
    // An edge inside another edge (or empty) disappears.
    for (std::size_t i = 0; i < edges.size(); ++i) {
      bool drop = edges[i].empty();
      for (std::size_t j = 0; j < edges.size() && !drop; ++j) {
        if (i == j) continue;
        drop = std::includes(edges[j].begin(), edges[j].end(), edges[i].begin(), edges[i].end()) &&
               (edges[i] != edges[j] || j < i);
      }
      if (drop) {
        edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  return edges.size() <= 1;
}

bool naive_free_connex(const ConjunctiveQuery& q) {
  std::map<std::string, int> id;
  for (const auto& v : q.variables()) id.emplace(v, static_cast<int>(id.size()));
  std::vector<std::set<int>> edges;
  for (const auto& a : q.body()) {
    std::set<int> e;
    for (const auto& t : a.args)
      if (t.is_variable()) e.insert(id.at(t.text));
    edges.push_back(e);
  }
  if (!naive_acyclic(edges)) return false;
  std::set<int> head;
  for (const auto& h : q.head()) head.insert(id.at(h));
  edges.push_back(head);
  return naive_acyclic(edges);
}

std::size_t naive_triangle_count(const TripartiteGraph& g) {
  std::set<Edge> e12(g.e12.begin(), g.e12.end()), e23(g.e23.begin(), g.e23.end()), e13(g.e13.begin(), g.e13.end());
  std::size_t n = 0;
  for (VertexId a = 0; a < g.n1; ++a)
    for (VertexId b = 0; b < g.n2; ++b)
      for (VertexId c = 0; c < g.n3; ++c)
        if (e12.contains({a, b}) && e23.contains({b, c}) && e13.contains({a, c})) ++n;
  return n;
}

Row decode(const Database& d, const Tuple& t) { return d.decode(t); }

RowSet decode_all(const Database& d, const std::set<Tuple>& ts) {
  RowSet out;
  for (const auto& t : ts) out.insert(d.decode(t));
  return out;
}

std::vector<Row> drain_unique(AnswerStream& s, const Database& d, bool* duplicates) {
  std::vector<Row> rows;
  std::set<Tuple> seen;
  Tuple t;
  if (duplicates != nullptr) *duplicates = false;
  while (s.next(t)) {
    if (!seen.insert(t).second && duplicates != nullptr) *duplicates = true;
    rows.push_back(d.decode(t));
  }
  return rows;
}

std::string source_path(const std::string& relative) { return std::string(UCQLAB_SOURCE_DIR) + "/" + relative; }

}  // namespace ucq::testing
