#include "ucqlab/qc.hpp"

#include <algorithm>
#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "ucqlab/cheater.hpp"
#include "ucqlab/prepared.hpp"
#include "ucqlab/reduction.hpp"

namespace ucq {

namespace {

std::string rx(int i) { return "R_X_" + std::to_string(i); }
std::string ry(int i) { return "R_Y_" + std::to_string(i); }

Atom atom(std::string rel, std::vector<std::string> vars) {
  Atom a{std::move(rel), {}};
  for (auto& v : vars) a.args.push_back(Term::variable(std::move(v)));
  return a;
}

std::vector<std::string> head_vars(int c) {
  std::vector<std::string> out;
  for (int i = 1; i <= 2 * c; ++i) out.push_back("v" + std::to_string(i));
  return out;
}

std::vector<std::string> tail_from(const std::vector<std::string>& head, std::size_t from) {
  return {head.begin() + static_cast<std::ptrdiff_t>(from), head.end()};
}

}  // namespace

UnionQuery generate_qc(int c) {
  if (c < 1) throw QueryError("qc family needs c >= 1");
  const auto head = head_vars(c);
  const auto uc = static_cast<std::size_t>(c);

  std::vector<Atom> b1{atom("R1", {"x", "y"}), atom("R2", {"y", "z"}), atom("R3", {"x", "z"}), atom("R4", head)};
  for (int i = 1; i <= c; ++i) b1.push_back(atom(rx(i), {"x"}));
  for (int i = 1; i <= c; ++i) b1.push_back(atom(ry(i), {"y"}));

  std::vector<Atom> b2;
  for (int i = 1; i <= c; ++i) b2.push_back(atom(rx(i), {head[static_cast<std::size_t>(i - 1)]}));
  for (int i = 1; i <= c; ++i) b2.push_back(atom(ry(i), {head[uc + static_cast<std::size_t>(i) - 1]}));

  std::vector<std::string> r4_args{"t3", "t4"};
  for (const auto& v : tail_from(head, 2)) r4_args.push_back(v);
  std::vector<Atom> b3{atom("R1", {head[0], "t1"}), atom("R2", {"t2", head[1]}), atom("R4", r4_args)};
  std::vector<Atom> b4{atom("R1", {"t1", head[0]}), atom("R2", {"t2", head[1]}), atom("R4", r4_args)};

  return UnionQuery({ConjunctiveQuery("Q1", head, b1), ConjunctiveQuery("Q2", head, b2),
                     ConjunctiveQuery("Q3", head, b3), ConjunctiveQuery("Q4", head, b4)});
}

std::vector<std::string> qc_bottom_answer(int c) {
  return std::vector<std::string>(static_cast<std::size_t>(2 * c), kBottom);
}

Database qc_database_from_graph(int c, const TripartiteGraph& g) {
  if (c < 1) throw QueryError("qc family needs c >= 1");
  Database d;
  auto a = [](VertexId i) { return "a" + std::to_string(i); };
  auto b = [](VertexId i) { return "b" + std::to_string(i); };
  auto cc = [](VertexId i) { return "c" + std::to_string(i); };
  d.add_relation("R1", 2);
  d.add_relation("R2", 2);
  d.add_relation("R3", 2);
  d.add_relation("R4", static_cast<std::size_t>(2 * c));
  for (auto [u, v] : g.e12) d.insert("R1", {a(u), b(v)});
  for (auto [u, v] : g.e23) d.insert("R2", {b(u), cc(v)});
  for (auto [u, v] : g.e13) d.insert("R3", {a(u), cc(v)});
  d.insert("R4", qc_bottom_answer(c));
  for (int i = 1; i <= c; ++i) {
    d.add_relation(rx(i), 1);
    d.add_relation(ry(i), 1);
    for (VertexId v = 0; v < g.n1; ++v) d.insert(rx(i), {a(v)});
    for (VertexId v = 0; v < g.n2; ++v) d.insert(ry(i), {b(v)});
  }
  return d;
}

namespace {

struct QcPipeline {
  int c;
  const Database& d;
  TriangleDetector detector;
  bool body_holds = false;

  QcPipeline(int cc, const Database& db, TriangleDetector det) : c(cc), d(db), detector(std::move(det)) {}

  const Relation* rel(const std::string& name, std::size_t arity) const {
    const Relation* r = d.find(name);
    if (r != nullptr && r->arity() != arity) {
      throw EngineError("relation " + name + " must have arity " + std::to_string(arity));
    }
    return r;
  }

  // Decides the Boolean body of Q1; one unit per relation row or candidate triple.
  Generator<WorkUnit> decide() {
    const Relation* r1 = rel("R1", 2);
    const Relation* r2 = rel("R2", 2);
    const Relation* r3 = rel("R3", 2);
    const Relation* r4 = rel("R4", static_cast<std::size_t>(2 * c));
    std::vector<const Relation*> xs, ys;
    for (int i = 1; i <= c; ++i) {
      xs.push_back(rel(rx(i), 1));
      ys.push_back(rel(ry(i), 1));
    }
    auto missing = [](const Relation* r) { return r == nullptr || r->empty(); };
    if (missing(r1) || missing(r2) || missing(r3) || missing(r4) || std::any_of(xs.begin(), xs.end(), missing) ||
        std::any_of(ys.begin(), ys.end(), missing)) {
      co_return;
    }
    auto in_all = [](const std::vector<const Relation*>& rs, Value v) {
      return std::all_of(rs.begin(), rs.end(), [&](const Relation* r) { return r->contains(std::span<const Value>(&v, 1)); });
    };

    // Renumber the filtered endpoints densely into a tripartite graph.
    std::unordered_map<Value, VertexId> id1, id2, id3;
    auto id_of = [](std::unordered_map<Value, VertexId>& ids, Value v) {
      return ids.emplace(v, static_cast<VertexId>(ids.size())).first->second;
    };
    std::vector<std::pair<Value, Value>> e12, e23, e13;
    for (std::size_t i = 0; i < r1->size(); ++i) {
      const Value* t = r1->row(i);
      if (in_all(xs, t[0]) && in_all(ys, t[1])) e12.emplace_back(t[0], t[1]);
      co_yield WorkUnit{};
    }
    for (std::size_t i = 0; i < r2->size(); ++i) {
      const Value* t = r2->row(i);
      if (in_all(ys, t[0])) e23.emplace_back(t[0], t[1]);
      co_yield WorkUnit{};
    }
    for (std::size_t i = 0; i < r3->size(); ++i) {
      const Value* t = r3->row(i);
      if (in_all(xs, t[0])) e13.emplace_back(t[0], t[1]);
      co_yield WorkUnit{};
    }
    TripartiteGraph g;
    for (auto [a, b] : e12) g.e12.emplace_back(id_of(id1, a), id_of(id2, b));
    const std::size_t n1 = id1.size(), n2 = id2.size();
    for (auto [b, c3] : e23) {
      auto it = id2.find(b);
      if (it != id2.end()) g.e23.emplace_back(it->second, id_of(id3, c3));
    }
    for (auto [a, c3] : e13) {
      auto it = id1.find(a);
      auto jt = id3.find(c3);
      if (it != id1.end() && jt != id3.end()) g.e13.emplace_back(it->second, jt->second);
    }
    g.n1 = n1;
    g.n2 = n2;
    g.n3 = id3.size();
    g.normalize();

    double threshold = 1;
    for (int i = 1; i < c; ++i) threshold *= static_cast<double>(std::max(n1, n2));
    if (static_cast<double>(g.n3) <= threshold) {
      std::vector<char> a12(n1 * n2, 0), a23(n2 * g.n3, 0), a13(n1 * g.n3, 0);
      for (auto [a, b] : g.e12) a12[a * n2 + b] = 1;
      for (auto [b, c3] : g.e23) a23[b * g.n3 + c3] = 1;
      for (auto [a, c3] : g.e13) a13[a * g.n3 + c3] = 1;
      for (std::size_t a = 0; a < n1; ++a)
        for (std::size_t b = 0; b < n2; ++b)
          for (std::size_t c3 = 0; c3 < g.n3; ++c3) {
            if (a12[a * n2 + b] && a23[b * g.n3 + c3] && a13[a * g.n3 + c3]) {
              body_holds = true;
              co_return;
            }
            co_yield WorkUnit{};
          }
    } else {
      body_holds = detector(g).has_value();  // one opaque pause
      co_yield WorkUnit{};
    }
  }

  Generator<const Tuple*> run(const UnionQuery& u) {
    Tuple answer;
    auto work = decide();
    bool deciding = true;
    auto advance = [&] {
      if (deciding) deciding = work.next();
    };
    for (std::size_t i = 1; i < u.size(); ++i) {
      Preparation prep(u[i], d);
      while (prep.step()) {
        advance();
        co_yield nullptr;
      }
      PreparedStream s(prep.result());
      for (;;) {
        Step st = s.step(answer);
        if (st == Step::kDone) break;
        advance();
        co_yield st == Step::kAnswer ? &answer : nullptr;
      }
    }
    while (deciding) {
      advance();
      co_yield nullptr;
    }
    if (!body_holds) co_return;
    const Relation* r4 = d.find("R4");
    for (std::size_t i = 0; i < r4->size(); ++i) {
      answer = r4->tuple(i);
      co_yield &answer;
    }
  }
};

class QcStream : public AnswerStream {
 public:
  QcStream(int c, const Database& d, TriangleDetector det)
      : query_(generate_qc(c)), pipeline_(std::make_unique<QcPipeline>(c, d, std::move(det))),
        inner_(pipeline_->run(query_)) {}

 protected:
  Step do_step(Tuple& out) override { return inner_.step(out); }

 private:
  UnionQuery query_;
  std::unique_ptr<QcPipeline> pipeline_;
  GeneratorStream inner_;
};

}  // namespace

StreamPtr qc_evaluate(int c, const Database& d, QcOptions options) {
  if (c < 1) throw QueryError("qc family needs c >= 1");
  TriangleDetector det = options.detector ? options.detector : TriangleDetector(triangle_detect_2path);
  std::vector<StreamPtr> inputs;
  inputs.push_back(std::make_unique<QcStream>(c, d, std::move(det)));
  return cheaters_adapter(std::move(inputs), 4, 3);
}

}  // namespace ucq
