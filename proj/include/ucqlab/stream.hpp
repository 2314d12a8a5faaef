#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "ucqlab/generator.hpp"
#include "ucqlab/tuple_table.hpp"

namespace ucq {

using Nanos = std::chrono::nanoseconds;

enum class Step { kAnswer, kWorking, kDone };

struct StreamStats {
  Nanos preprocessing{0};
  std::vector<Nanos> gaps;  // one per answer returned by next()
  std::size_t answers = 0;
  std::size_t steps = 0;
  std::size_t max_steps_per_answer = 0;

  Nanos max_gap() const;
  Nanos median_gap() const;
};

// Single-consumer answer stream. step() performs one bounded unit of work;
// next() loops step() until an answer arrives and times the wait.
class AnswerStream {
 public:
  virtual ~AnswerStream() = default;

  Step step(Tuple& out);
  bool next(Tuple& out);

  const StreamStats& stats() const { return stats_; }
  void set_preprocessing(Nanos d) { stats_.preprocessing = d; }
  void record_gaps(bool on) { record_gaps_ = on; }
  // Timed runs can hand over a buffer with pages already touched (and capacity
  // for every answer), so recording takes no allocation or page fault.
  void use_gap_buffer(std::vector<Nanos> buffer) {
    buffer.clear();
    stats_.gaps = std::move(buffer);
  }

 protected:
  virtual Step do_step(Tuple& out) = 0;

 private:
  StreamStats stats_;
  std::size_t steps_since_answer_ = 0;
  bool record_gaps_ = true;
};

using StreamPtr = std::unique_ptr<AnswerStream>;

// Answers from an already materialized list.
class VectorStream : public AnswerStream {
 public:
  explicit VectorStream(std::vector<Tuple> answers) : answers_(std::move(answers)) {}

 protected:
  Step do_step(Tuple& out) override;

 private:
  std::vector<Tuple> answers_;
  std::size_t pos_ = 0;
};

// Adapts a coroutine yielding answer pointers; nullptr marks a working step.
class GeneratorStream : public AnswerStream {
 public:
  explicit GeneratorStream(Generator<const Tuple*> gen) : gen_(std::move(gen)) {}

 protected:
  Step do_step(Tuple& out) override;

 private:
  Generator<const Tuple*> gen_;
};

// Drains a stream; `limit` caps the answer count.
std::vector<Tuple> collect(AnswerStream& s, std::optional<std::size_t> limit = std::nullopt);

}  // namespace ucq
