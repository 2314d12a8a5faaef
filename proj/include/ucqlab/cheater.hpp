#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ucqlab/stream.hpp"
#include "ucqlab/tuple_table.hpp"

namespace ucq {

// Raised when an input repeats an answer more often than promised.
class IntegrityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct CheaterOptions {
  std::size_t dup_bound = 1;
  std::size_t pause_bound = 0;
  // Input steps charged per released answer, before scaling by both bounds.
  std::size_t base_steps = 1;
  // Input steps run before the first release.
  std::size_t warmup_steps = 0;
};

// Concatenates the inputs, drops repeats and releases at most one buffered
// answer per step. Each adapter step drives a fixed budget of
// dup_bound * (pause_bound + 1) * base_steps input steps, so the work between
// outputs stays bounded as long as distinct answers arrive at the promised rate.
class CheaterAdapter : public AnswerStream {
 public:
  CheaterAdapter(std::vector<StreamPtr> inputs, CheaterOptions options);

  std::size_t budget() const { return budget_; }
  std::size_t stalls() const { return stalls_; }            // steps that released nothing
  std::size_t max_input_steps_between_outputs() const { return max_between_; }
  std::size_t input_answers() const { return input_answers_; }

 protected:
  Step do_step(Tuple& out) override;

 private:
  void pull(std::size_t steps);
  void absorb(const Tuple& t);

  std::vector<StreamPtr> inputs_;
  CheaterOptions options_;
  std::size_t budget_;
  std::size_t current_ = 0;
  std::optional<TupleTable> seen_;
  std::vector<std::uint32_t> counts_;
  std::vector<std::uint32_t> queue_;  // rows of seen_ not yet released
  std::size_t queue_head_ = 0;
  bool warmed_ = false;
  std::size_t stalls_ = 0;
  std::size_t since_output_ = 0;
  std::size_t max_between_ = 0;
  std::size_t input_answers_ = 0;
  Tuple scratch_;
};

StreamPtr cheaters_adapter(std::vector<StreamPtr> streams, std::size_t dup_bound,
                           std::size_t pause_bound);

}  // namespace ucq
