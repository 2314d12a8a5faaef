#include "ucqlab/union_eval.hpp"

#include <algorithm>
#include <memory>

#include "ucqlab/hypergraph.hpp"
#include "ucqlab/prepared.hpp"

namespace ucq {

namespace {

// How answers of one stream land in one virtual relation.
struct Feed {
  Relation* target;
  // Per virtual-atom argument: head positions of the source whose values must agree.
  std::vector<std::vector<std::size_t>> sources;
};

Feed make_feed(Relation* target, const VirtualAtom& va, const std::vector<std::string>& source_head) {
  Feed f{target, std::vector<std::vector<std::size_t>>(va.variables.size())};
  const auto& h = va.provenance.witness_hom;
  for (const auto& v2 : va.provenance.witness_v2) {
    const Term& image = h(v2);
    auto arg = std::find(va.variables.begin(), va.variables.end(), image.text);
    auto pos = std::find(source_head.begin(), source_head.end(), v2);
    if (!image.is_variable() || arg == va.variables.end() || pos == source_head.end()) {
      throw EngineError("provenance of " + va.symbol + " does not match its provider");
    }
    f.sources[static_cast<std::size_t>(arg - va.variables.begin())].push_back(
        static_cast<std::size_t>(pos - source_head.begin()));
  }
  for (const auto& s : f.sources)
    if (s.empty()) throw EngineError("virtual atom " + va.symbol + " has an argument without a source");
  return f;
}

void apply_feed(const Feed& f, const Tuple& answer, Tuple& scratch) {
  scratch.resize(f.sources.size());
  for (std::size_t i = 0; i < f.sources.size(); ++i) {
    const auto& src = f.sources[i];
    scratch[i] = answer[src[0]];
    for (std::size_t k = 1; k < src.size(); ++k)
      if (answer[src[k]] != scratch[i]) return;  // not the image of a consistent assignment
  }
  f.target->insert(scratch);
}

struct Pipeline {
  ResolvedUnion r;
  const Database& d;
  RelationOverlay overlay;
  std::vector<std::string> out_head;

  Pipeline(ResolvedUnion res, const Database& db) : r(std::move(res)), d(db) {}

  std::vector<std::size_t> permutation(const ConjunctiveQuery& q) const {
    std::vector<std::size_t> perm;
    for (const auto& v : out_head)
      perm.push_back(static_cast<std::size_t>(std::find(q.head().begin(), q.head().end(), v) - q.head().begin()));
    return perm;
  }

  Generator<const Tuple*> run() {
    const std::size_t n = r.disjuncts.size();
    out_head = r.disjuncts.front().base.head();

    for (const auto& dq : r.disjuncts)
      for (const auto& va : dq.virtual_atoms) overlay.emplace(va.symbol, Relation(va.variables.size()));

    // Which disjunct streams feed which virtual relations; the rest need auxiliary streams.
    std::vector<std::vector<Feed>> feeds(n);
    struct Aux {
      ConjunctiveQuery query;
      Feed feed;
    };
    std::vector<Aux> aux;
    for (const auto& dq : r.disjuncts) {
      for (const auto& va : dq.virtual_atoms) {
        const auto& provider = r.disjuncts.at(va.provider);
        Relation* target = &overlay.at(va.symbol);
        const auto& s = va.provenance.witness_s;
        const auto& head = provider.base.head();
        const bool direct = provider.virtual_atoms.empty() && s.size() == head.size() &&
                            std::is_permutation(s.begin(), s.end(), head.begin());
        if (direct) {
          feeds[va.provider].push_back(make_feed(target, va, head));
        } else {
          ConjunctiveQuery q = provider.base.with_head(s);
          aux.push_back({q, make_feed(target, va, q.head())});
        }
      }
    }

    Tuple answer, permuted, scratch;
    auto stream_prepared = [&](Preparation& prep) -> Generator<const Tuple*> {
      while (prep.step()) co_yield nullptr;
      co_return;
    };

    // Plain disjuncts first.
    for (std::size_t i = 0; i < n; ++i) {
      const auto& dq = r.disjuncts[i];
      if (!dq.virtual_atoms.empty()) continue;
      Preparation prep(dq.base, d);
      for (auto g = stream_prepared(prep); g.next();) co_yield nullptr;
      PreparedStream s(prep.result());
      const auto perm = permutation(dq.base);
      for (;;) {
        Step st = s.step(answer);
        if (st == Step::kDone) break;
        if (st == Step::kWorking) {
          co_yield nullptr;
          continue;
        }
        for (const auto& f : feeds[i]) apply_feed(f, answer, scratch);
        permuted.resize(perm.size());
        for (std::size_t k = 0; k < perm.size(); ++k) permuted[k] = answer[perm[k]];
        co_yield &permuted;
      }
    }

    for (auto& a : aux) {
      Preparation prep(a.query, d);
      for (auto g = stream_prepared(prep); g.next();) co_yield nullptr;
      PreparedStream s(prep.result());
      for (;;) {
        Step st = s.step(answer);
        if (st == Step::kDone) break;
        if (st == Step::kAnswer) apply_feed(a.feed, answer, scratch);
        co_yield nullptr;
      }
    }

    for (std::size_t i = 0; i < n; ++i) {
      const auto& dq = r.disjuncts[i];
      if (dq.virtual_atoms.empty()) continue;
      const ConjunctiveQuery q = dq.extended();
      Preparation prep(q, d, &overlay);
      for (auto g = stream_prepared(prep); g.next();) co_yield nullptr;
      PreparedStream s(prep.result());
      const auto perm = permutation(q);
      for (;;) {
        Step st = s.step(answer);
        if (st == Step::kDone) break;
        if (st == Step::kWorking) {
          co_yield nullptr;
          continue;
        }
        permuted.resize(perm.size());
        for (std::size_t k = 0; k < perm.size(); ++k) permuted[k] = answer[perm[k]];
        co_yield &permuted;
      }
    }
  }
};

// Keeps the pipeline state alive alongside the coroutine that references it.
class PipelineStream : public AnswerStream {
 public:
  PipelineStream(ResolvedUnion r, const Database& d)
      : pipeline_(std::make_unique<Pipeline>(std::move(r), d)), inner_(pipeline_->run()) {}

 protected:
  Step do_step(Tuple& out) override { return inner_.step(out); }

 private:
  std::unique_ptr<Pipeline> pipeline_;
  GeneratorStream inner_;
};

}  // namespace

StreamPtr enumerate_union(const ResolvedUnion& r, const Database& d, UnionEvalOptions options) {
  if (r.disjuncts.empty()) throw EngineError("empty union");
  std::size_t extended = 0;
  for (const auto& dq : r.disjuncts) {
    const ConjunctiveQuery q = dq.extended();
    if (!is_free_connex(q)) throw EngineError("disjunct " + q.name() + " is not free-connex after extension");
    if (!dq.virtual_atoms.empty()) ++extended;
    for (const auto& va : dq.virtual_atoms)
      if (va.provider >= r.disjuncts.size()) throw EngineError("virtual atom " + va.symbol + " lacks provenance");
  }
  auto pipeline = std::make_unique<PipelineStream>(r, d);
  if (!options.deduplicate) return pipeline;
  std::vector<StreamPtr> inputs;
  inputs.push_back(std::move(pipeline));
  return cheaters_adapter(std::move(inputs), r.disjuncts.size(), extended);
}

}  // namespace ucq
