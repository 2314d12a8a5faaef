#include "ucqlab/stream.hpp"

#include <algorithm>

namespace ucq {

Nanos StreamStats::max_gap() const {
  if (gaps.empty()) return Nanos{0};
  return *std::max_element(gaps.begin(), gaps.end());
}

Nanos StreamStats::median_gap() const {
  if (gaps.empty()) return Nanos{0};
  auto copy = gaps;
  auto mid = copy.begin() + static_cast<std::ptrdiff_t>(copy.size() / 2);
  std::nth_element(copy.begin(), mid, copy.end());
  return *mid;
}

Step AnswerStream::step(Tuple& out) {
  Step s = do_step(out);
  ++stats_.steps;
  ++steps_since_answer_;
  if (s == Step::kAnswer) {
    ++stats_.answers;
    stats_.max_steps_per_answer = std::max(stats_.max_steps_per_answer, steps_since_answer_);
    steps_since_answer_ = 0;
  }
  return s;
}

bool AnswerStream::next(Tuple& out) {
  auto start = std::chrono::steady_clock::now();
  while (true) {
    Step s = step(out);
    if (s == Step::kDone) return false;
    if (s == Step::kAnswer) {
      if (record_gaps_) stats_.gaps.push_back(std::chrono::steady_clock::now() - start);
      return true;
    }
  }
}

Step VectorStream::do_step(Tuple& out) {
  if (pos_ >= answers_.size()) return Step::kDone;
  out = answers_[pos_++];
  return Step::kAnswer;
}

Step GeneratorStream::do_step(Tuple& out) {
  if (!gen_.next()) return Step::kDone;
  const Tuple* t = gen_.value();
  if (t == nullptr) return Step::kWorking;
  out = *t;
  return Step::kAnswer;
}

std::vector<Tuple> collect(AnswerStream& s, std::optional<std::size_t> limit) {
  std::vector<Tuple> out;
  Tuple t;
  while ((!limit || out.size() < *limit) && s.next(t)) out.push_back(t);
  return out;
}

}  // namespace ucq
