#include "ucqlab/prepared.hpp"

#include <algorithm>
#include <chrono>

#include "ucqlab/hypergraph.hpp"
#include "ucqlab/oracle.hpp"

namespace ucq {

struct Preparation::Plan {
  struct AtomPlan {
    const Relation* rel = nullptr;
    std::vector<int> col_of_pos;      // schema column per position, -1 for constants
    std::vector<Value> const_of_pos;
    std::vector<std::size_t> schema;  // distinct variables, first-appearance order
    VarMask mask = 0;
  };
  struct FreePlan {
    std::size_t atom = 0;
    std::vector<std::size_t> proj_cols;  // columns of the atom schema kept
    std::vector<std::size_t> schema;     // variable indices
    int parent = -1;
    std::vector<std::size_t> own_key_cols;
    std::vector<std::size_t> parent_key_cols;
  };

  std::vector<AtomPlan> atoms;
  JoinTree tree;
  std::vector<std::size_t> pre, post;
  std::vector<std::vector<std::size_t>> child_cols, parent_cols;  // per atom, towards parent
  std::vector<FreePlan> free;  // preorder over the free-part tree
  bool impossible = false;     // a relation or constant is missing
};

namespace {

std::vector<std::size_t> columns_of(const std::vector<std::size_t>& schema, VarMask vars) {
  std::vector<std::size_t> cols;
  for (std::size_t c = 0; c < schema.size(); ++c)
    if (contains(vars, schema[c])) cols.push_back(c);
  return cols;
}

// Columns of `schema` holding each variable of `order`, in that order.
std::vector<std::size_t> columns_for(const std::vector<std::size_t>& schema,
                                     const std::vector<std::size_t>& order) {
  std::vector<std::size_t> cols;
  for (std::size_t v : order)
    cols.push_back(static_cast<std::size_t>(std::find(schema.begin(), schema.end(), v) - schema.begin()));
  return cols;
}

}  // namespace

Preparation::Preparation(ConjunctiveQuery q, const Database& d, const RelationOverlay* overlay)
    : q_(std::move(q)), d_(d), overlay_(overlay), plan_(std::make_unique<Plan>()),
      out_(std::make_shared<PreparedQuery>()) {
  if (!is_free_connex(q_)) throw EngineError("query " + q_.name() + " is not free-connex");
  Plan& plan = *plan_;

  for (std::size_t i = 0; i < q_.body().size(); ++i) {
    const Atom& atom = q_.body()[i];
    Plan::AtomPlan ap;
    ap.mask = q_.atom_mask(i);
    const Relation* rel = nullptr;
    if (overlay_ != nullptr) {
      auto it = overlay_->find(atom.relation);
      if (it != overlay_->end()) rel = &it->second;
    }
    if (rel == nullptr) rel = d_.find(atom.relation);
    if (rel != nullptr && rel->arity() != atom.arity()) {
      throw EngineError("relation " + atom.relation + " has arity " + std::to_string(rel->arity()) +
                        " in the database but " + std::to_string(atom.arity()) + " in the query");
    }
    if (rel == nullptr) plan.impossible = true;
    ap.rel = rel;
    for (const auto& t : atom.args) {
      if (t.is_variable()) {
        std::size_t v = q_.require_index(t.text);
        auto it = std::find(ap.schema.begin(), ap.schema.end(), v);
        if (it == ap.schema.end()) {
          ap.schema.push_back(v);
          it = ap.schema.end() - 1;
        }
        ap.col_of_pos.push_back(static_cast<int>(it - ap.schema.begin()));
        ap.const_of_pos.push_back(0);
      } else {
        auto c = d_.pool().find(t.text);
        if (!c) plan.impossible = true;
        ap.col_of_pos.push_back(-1);
        ap.const_of_pos.push_back(c.value_or(0));
      }
    }
    plan.atoms.push_back(std::move(ap));
  }

  std::vector<VarMask> masks;
  for (const auto& ap : plan.atoms) masks.push_back(ap.mask);
  GyoResult g = gyo(masks);
  if (!g.acyclic) throw EngineError("internal: free-connex query without a join tree");
  plan.tree = g.tree;
  plan.pre = plan.tree.preorder();
  plan.post = plan.tree.postorder();
  plan.child_cols.resize(masks.size());
  plan.parent_cols.resize(masks.size());
  for (std::size_t c = 0; c < masks.size(); ++c) {
    int p = plan.tree.parent[c];
    if (p < 0) continue;
    const auto& ps = plan.atoms[static_cast<std::size_t>(p)].schema;
    std::vector<std::size_t> shared;
    for (std::size_t v : plan.atoms[c].schema)
      if (std::find(ps.begin(), ps.end(), v) != ps.end()) shared.push_back(v);
    plan.child_cols[c] = columns_for(plan.atoms[c].schema, shared);
    plan.parent_cols[c] = columns_for(ps, shared);
  }

  // Free part: projections onto free variables, dropping those inside another.
  const VarMask free = q_.free_mask();
  std::vector<std::size_t> kept;
  for (std::size_t a = 0; a < masks.size(); ++a) {
    VarMask fa = masks[a] & free;
    if (fa == 0) continue;
    bool dominated = false;
    for (std::size_t b = 0; b < masks.size() && !dominated; ++b) {
      if (b == a) continue;
      VarMask fb = masks[b] & free;
      dominated = is_subset(fa, fb) && (fa != fb || b < a);
    }
    if (!dominated) kept.push_back(a);
  }
  std::vector<VarMask> free_masks;
  for (std::size_t a : kept) free_masks.push_back(masks[a] & free);
  GyoResult fg = gyo(free_masks);
  if (!fg.acyclic) throw EngineError("internal: free projections are cyclic");
  std::vector<int> position(kept.size(), -1);
  for (std::size_t k : fg.tree.preorder()) {
    Plan::FreePlan fp;
    fp.atom = kept[k];
    const auto& schema = plan.atoms[fp.atom].schema;
    fp.proj_cols = columns_of(schema, free);
    for (std::size_t c : fp.proj_cols) fp.schema.push_back(schema[c]);
    int tp = fg.tree.parent[k];
    if (tp >= 0) {
      const Plan::FreePlan& parent = plan.free[static_cast<std::size_t>(position[static_cast<std::size_t>(tp)])];
      std::vector<std::size_t> shared;
      for (std::size_t v : fp.schema)
        if (std::find(parent.schema.begin(), parent.schema.end(), v) != parent.schema.end())
          shared.push_back(v);
      fp.parent = position[static_cast<std::size_t>(tp)];
      fp.own_key_cols = columns_for(fp.schema, shared);
      fp.parent_key_cols = columns_for(parent.schema, shared);
    }
    position[k] = static_cast<int>(plan.free.size());
    plan.free.push_back(std::move(fp));
  }
  for (const auto& var : q_.head()) {
    std::size_t v = q_.require_index(var);
    bool found = false;
    for (std::size_t k = 0; k < plan.free.size() && !found; ++k) {
      const auto& s = plan.free[k].schema;
      auto it = std::find(s.begin(), s.end(), v);
      if (it != s.end()) {
        out_->head_source_.emplace_back(k, static_cast<std::size_t>(it - s.begin()));
        found = true;
      }
    }
    if (!found) throw EngineError("internal: head variable " + var + " not covered");
  }
  task_ = work();
}

Preparation::~Preparation() = default;

Generator<WorkUnit> Preparation::work() {
  Plan& plan = *plan_;
  PreparedQuery& out = *out_;
  if (plan.impossible) {
    out.empty_ = true;
    co_return;
  }
  const std::size_t n = plan.atoms.size();
  std::vector<RowArena> tables;
  std::vector<std::vector<std::uint32_t>> alive(n);
  Tuple buf;

  // 1. Select constants and repeated variables, project to distinct variables.
  // Relations hold distinct rows and this projection is injective on the
  // selected ones, so no deduplication is needed.
  for (std::size_t a = 0; a < n; ++a) {
    const auto& ap = plan.atoms[a];
    tables.emplace_back(ap.schema.size());
    tables[a].reserve(ap.rel->size());
    buf.assign(ap.schema.size(), 0);
    for (std::size_t r = 0; r < ap.rel->size(); ++r) {
      const Value* row = ap.rel->row(r);
      VarMask set = 0;
      bool ok = true;
      for (std::size_t p = 0; p < ap.col_of_pos.size() && ok; ++p) {
        int c = ap.col_of_pos[p];
        if (c < 0) {
          ok = row[p] == ap.const_of_pos[p];
        } else if (contains(set, static_cast<std::size_t>(c))) {
          ok = buf[static_cast<std::size_t>(c)] == row[p];
        } else {
          buf[static_cast<std::size_t>(c)] = row[p];
          set |= bit(static_cast<std::size_t>(c));
        }
      }
      if (ok) {
        alive[a].push_back(static_cast<std::uint32_t>(tables[a].size()));
        tables[a].push(buf.data());
      }
      co_yield WorkUnit{};
    }
    if (alive[a].empty()) {
      out.empty_ = true;
      co_return;
    }
  }

  auto semijoin = [&](std::size_t keep, const std::vector<std::size_t>& keep_cols,
                      std::size_t probe, const std::vector<std::size_t>& probe_cols,
                      TupleTable& keys) -> Generator<WorkUnit> {
    std::vector<std::uint32_t> survivors;
    if (probe_cols.size() == 1) {
      // Values are dense ids, so one shared variable needs only a bitset.
      const std::size_t pc = probe_cols[0], kc = keep_cols[0];
      Value top = 0;
      for (std::uint32_t r : alive[probe]) top = std::max(top, tables[probe].row(r)[pc]);
      std::vector<std::uint64_t> seen(top / 64 + 1, 0);
      for (std::uint32_t r : alive[probe]) {
        const Value v = tables[probe].row(r)[pc];
        seen[v / 64] |= std::uint64_t{1} << (v % 64);
        co_yield WorkUnit{};
      }
      for (std::uint32_t r : alive[keep]) {
        const Value v = tables[keep].row(r)[kc];
        if (v <= top && ((seen[v / 64] >> (v % 64)) & 1U) != 0) survivors.push_back(r);
        co_yield WorkUnit{};
      }
      alive[keep] = std::move(survivors);
      co_return;
    }
    keys = TupleTable(probe_cols.size());
    keys.reserve(alive[probe].size());
    Tuple k(probe_cols.size());
    for (std::uint32_t r : alive[probe]) {
      const Value* row = tables[probe].row(r);
      for (std::size_t i = 0; i < probe_cols.size(); ++i) k[i] = row[probe_cols[i]];
      keys.insert(k.data());
      co_yield WorkUnit{};
    }
    for (std::uint32_t r : alive[keep]) {
      const Value* row = tables[keep].row(r);
      for (std::size_t i = 0; i < keep_cols.size(); ++i) k[i] = row[keep_cols[i]];
      if (keys.find(k.data()) >= 0) survivors.push_back(r);
      co_yield WorkUnit{};
    }
    alive[keep] = std::move(survivors);
  };

  // 2. Bottom-up, then 3. top-down semi-joins along the join tree.
  TupleTable keys;
  for (std::size_t c : plan.post) {
    int p = plan.tree.parent[c];
    if (p < 0) continue;
    auto pass = semijoin(static_cast<std::size_t>(p), plan.parent_cols[c], c, plan.child_cols[c], keys);
    while (pass.next()) co_yield WorkUnit{};
    if (alive[static_cast<std::size_t>(p)].empty()) {
      out.empty_ = true;
      co_return;
    }
  }
  for (std::size_t c : plan.pre) {
    int p = plan.tree.parent[c];
    if (p < 0) continue;
    auto pass = semijoin(c, plan.child_cols[c], static_cast<std::size_t>(p), plan.parent_cols[c], keys);
    while (pass.next()) co_yield WorkUnit{};
  }

  // 4. Free projections, 5. grouping towards parents.
  for (const auto& fp : plan.free) {
    PreparedQuery::Node node;
    node.parent = fp.parent;
    node.parent_key_cols = fp.parent_key_cols;
    const bool whole = fp.proj_cols.size() == plan.atoms[fp.atom].schema.size();
    node.table = RowArena(fp.schema.size());
    TupleTable distinct(fp.schema.size());
    if (whole) {
      node.table.reserve(alive[fp.atom].size());
    } else {
      distinct.reserve(alive[fp.atom].size());
    }
    Tuple proj(fp.proj_cols.size());
    for (std::uint32_t r : alive[fp.atom]) {
      const Value* row = tables[fp.atom].row(r);
      for (std::size_t i = 0; i < fp.proj_cols.size(); ++i) proj[i] = row[fp.proj_cols[i]];
      if (whole) {
        node.table.push(proj.data());
      } else {
        distinct.insert(proj.data());
      }
      co_yield WorkUnit{};
    }
    if (!whole) node.table = distinct.release();
    if (fp.parent >= 0) {
      node.by_parent_key = GroupIndex(fp.own_key_cols);
      std::vector<std::uint32_t> group;
      group.reserve(node.table.size());
      for (std::uint32_t r = 0; r < node.table.size(); ++r) {
        group.push_back(node.by_parent_key.count(node.table.row(r)));
        co_yield WorkUnit{};
      }
      node.by_parent_key.finish_counting();
      for (std::uint32_t r = 0; r < node.table.size(); ++r) {
        node.by_parent_key.place_in(group[r], r);
        co_yield WorkUnit{};
      }
    }
    out.nodes_.push_back(std::move(node));
  }
}

bool Preparation::step() {
  if (finished_) return false;
  if (!task_.next()) finished_ = true;
  return !finished_;
}

void Preparation::run() {
  while (step()) {
  }
}

std::shared_ptr<const PreparedQuery> Preparation::result() const {
  if (!finished_) throw EngineError("preparation not finished");
  return out_;
}

std::shared_ptr<const PreparedQuery> prepare_free_connex(const ConjunctiveQuery& q, const Database& d,
                                                         const RelationOverlay* overlay) {
  Preparation prep(q, d, overlay);
  prep.run();
  return prep.result();
}

PreparedStream::PreparedStream(std::shared_ptr<const PreparedQuery> p) : p_(std::move(p)) {
  const std::size_t m = p_->nodes_.size();
  range_.resize(m);
  len_.assign(m, 0);
  pos_.assign(m, 0);
  // The first answer is built here, as part of preparation.
  finished_ = p_->empty_ || (m > 0 && p_->nodes_[0].table.empty());
  if (finished_) return;
  for (std::size_t k = 0; k < m; ++k) reset_range(k);
  emit(first_);
}

void PreparedStream::emit(Tuple& out) const {
  out.resize(p_->head_source_.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto [node, col] = p_->head_source_[i];
    out[i] = p_->nodes_[node].table.row(current_row(node))[col];
  }
}

std::uint32_t PreparedStream::current_row(std::size_t k) const {
  return p_->nodes_[k].parent < 0 ? static_cast<std::uint32_t>(pos_[k]) : range_[k][pos_[k]];
}

void PreparedStream::reset_range(std::size_t k) {
  const auto& node = p_->nodes_[k];
  pos_[k] = 0;
  if (node.parent < 0) {
    len_[k] = node.table.size();
    return;
  }
  const auto parent = static_cast<std::size_t>(node.parent);
  const Value* prow = p_->nodes_[parent].table.row(current_row(parent));
  key_.resize(node.parent_key_cols.size());
  for (std::size_t i = 0; i < key_.size(); ++i) key_[i] = prow[node.parent_key_cols[i]];
  range_[k] = node.by_parent_key.lookup(key_.data());
  len_[k] = range_[k].size();
  if (range_[k].empty()) throw EngineError("internal: dangling tuple after full reduction");
}

Step PreparedStream::do_step(Tuple& out) {
  if (finished_) return Step::kDone;
  const std::size_t m = p_->nodes_.size();
  if (!started_) {
    started_ = true;
    out.swap(first_);
    return Step::kAnswer;
  }
  std::size_t k = m;
  while (k > 0 && pos_[k - 1] + 1 >= len_[k - 1]) --k;
  if (k == 0) {
    finished_ = true;
    return Step::kDone;
  }
  ++pos_[k - 1];
  for (std::size_t j = k; j < m; ++j) reset_range(j);
  emit(out);
  return Step::kAnswer;
}

StreamPtr enumerate_prepared(std::shared_ptr<const PreparedQuery> p) {
  return std::make_unique<PreparedStream>(std::move(p));
}

bool evaluate_boolean(const ConjunctiveQuery& q, const Database& d) {
  ConjunctiveQuery boolean = q.with_head({});
  if (is_acyclic(boolean)) return !prepare_free_connex(boolean, d)->empty();
  return has_homomorphism(boolean, d);
}

}  // namespace ucq
