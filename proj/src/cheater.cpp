#include "ucqlab/cheater.hpp"

#include <algorithm>
#include <string>

namespace ucq {

CheaterAdapter::CheaterAdapter(std::vector<StreamPtr> inputs, CheaterOptions options)
    : inputs_(std::move(inputs)), options_(options) {
  if (options_.dup_bound == 0) throw std::invalid_argument("dup_bound must be positive");
  budget_ = options_.dup_bound * (options_.pause_bound + 1) * std::max<std::size_t>(1, options_.base_steps);
}

void CheaterAdapter::absorb(const Tuple& t) {
  ++input_answers_;
  if (!seen_) seen_.emplace(t.size());
  if (seen_->arity() != t.size()) throw IntegrityError("input streams disagree on arity");
  auto [id, fresh] = seen_->insert(t.data());
  if (fresh) {
    counts_.push_back(1);
    queue_.push_back(id);
    return;
  }
  if (++counts_[id] > options_.dup_bound) {
    throw IntegrityError("answer repeated " + std::to_string(counts_[id]) +
                         " times, above the bound " + std::to_string(options_.dup_bound));
  }
}

void CheaterAdapter::pull(std::size_t steps) {
  for (std::size_t i = 0; i < steps && current_ < inputs_.size(); ++i) {
    ++since_output_;
    Step s = inputs_[current_]->step(scratch_);
    if (s == Step::kAnswer) absorb(scratch_);
    else if (s == Step::kDone) ++current_;
  }
}

Step CheaterAdapter::do_step(Tuple& out) {
  if (!warmed_) {
    warmed_ = true;
    pull(options_.warmup_steps);
  }
  pull(budget_);
  if (queue_head_ < queue_.size()) {
    const std::uint32_t row = queue_[queue_head_++];
    out = seen_->tuple(row);
    max_between_ = std::max(max_between_, since_output_);
    since_output_ = 0;
    return Step::kAnswer;
  }
  if (current_ >= inputs_.size()) return Step::kDone;
  ++stalls_;
  return Step::kWorking;
}

StreamPtr cheaters_adapter(std::vector<StreamPtr> streams, std::size_t dup_bound,
                           std::size_t pause_bound) {
  return std::make_unique<CheaterAdapter>(std::move(streams),
                                          CheaterOptions{dup_bound, pause_bound, 1, 0});
}

}  // namespace ucq
