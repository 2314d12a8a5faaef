#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>

#include "ucqlab/database.hpp"
#include "ucqlab/generator.hpp"
#include "ucqlab/query.hpp"
#include "ucqlab/stream.hpp"

namespace ucq {

class EngineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Relations consulted before the database; holds virtual relations.
using RelationOverlay = std::map<std::string, Relation>;

// Fully reduced free-variable projections arranged along a join tree, with each
// non-root node grouped by its key towards the parent. Enumeration walks the tree
// as an odometer; every lookup is non-empty, so each answer costs O(#nodes).
class PreparedQuery {
 public:
  std::size_t arity() const { return head_source_.size(); }
  bool empty() const { return empty_; }
  std::size_t num_nodes() const { return nodes_.size(); }

 private:
  friend class Preparation;
  friend class PreparedStream;

  struct Node {
    RowArena table;
    GroupIndex by_parent_key;
    int parent = -1;                            // preorder position of the parent
    std::vector<std::size_t> parent_key_cols;   // columns of the parent's row forming the key
  };

  std::vector<Node> nodes_;                                  // preorder
  std::vector<std::pair<std::size_t, std::size_t>> head_source_;  // (node, column)
  bool empty_ = false;
};

// Resumable preparation: each step() does O(1) work, so callers can interleave
// it with other output. The query must be free-connex.
class Preparation {
 public:
  Preparation(ConjunctiveQuery q, const Database& d, const RelationOverlay* overlay = nullptr);
  Preparation(const Preparation&) = delete;
  Preparation& operator=(const Preparation&) = delete;
  ~Preparation();

  bool step();  // false once finished
  void run();
  std::shared_ptr<const PreparedQuery> result() const;

 private:
  struct Plan;
  Generator<WorkUnit> work();

  ConjunctiveQuery q_;
  const Database& d_;
  const RelationOverlay* overlay_;
  std::unique_ptr<Plan> plan_;
  std::shared_ptr<PreparedQuery> out_;
  Generator<WorkUnit> task_;
  bool finished_ = false;
};

std::shared_ptr<const PreparedQuery> prepare_free_connex(const ConjunctiveQuery& q,
                                                         const Database& d,
                                                         const RelationOverlay* overlay = nullptr);

class PreparedStream : public AnswerStream {
 public:
  explicit PreparedStream(std::shared_ptr<const PreparedQuery> p);

 protected:
  Step do_step(Tuple& out) override;

 private:
  void reset_range(std::size_t k);
  std::uint32_t current_row(std::size_t k) const;
  void emit(Tuple& out) const;

  std::shared_ptr<const PreparedQuery> p_;
  std::vector<std::span<const std::uint32_t>> range_;  // unused for roots, which scan every row
  std::vector<std::size_t> len_;
  std::vector<std::size_t> pos_;
  Tuple key_;
  Tuple first_;
  bool started_ = false;
  bool finished_ = false;
};

StreamPtr enumerate_prepared(std::shared_ptr<const PreparedQuery> p);

// Body satisfiability: full reducer when acyclic, homomorphism search otherwise.
bool evaluate_boolean(const ConjunctiveQuery& q, const Database& d);

}  // namespace ucq
