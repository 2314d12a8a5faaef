#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ucq {

using Value = std::uint32_t;
using Tuple = std::vector<Value>;

inline std::uint64_t hash_values(const Value* v, std::size_t n) {
  std::uint64_t h = 0x243F6A8885A308D3ULL ^ n;
  for (std::size_t i = 0; i < n; ++i) {
    h = (h ^ v[i]) * 0x9E3779B97F4A7C15ULL;
    h ^= h >> 29;
  }
  return h;
}

// Append-only fixed-arity rows with no lookup; callers guarantee distinctness.
class RowArena {
 public:
  explicit RowArena(std::size_t arity = 0, std::vector<Value> data = {})
      : arity_(arity), data_(std::move(data)) {}

  std::size_t arity() const { return arity_; }
  std::size_t size() const { return arity_ == 0 ? zero_arity_rows_ : data_.size() / arity_; }
  bool empty() const { return size() == 0; }
  void reserve(std::size_t rows) { data_.reserve(rows * arity_); }
  void push(const Value* t) {
    data_.insert(data_.end(), t, t + arity_);
    if (arity_ == 0) ++zero_arity_rows_;
  }
  const Value* row(std::size_t i) const { return data_.data() + i * arity_; }

 private:
  std::size_t arity_;
  std::size_t zero_arity_rows_ = 0;
  std::vector<Value> data_;
};

// Deduplicating set of fixed-arity tuples stored row-major in one arena.
// Open addressing; slots hold row index + 1.
class TupleTable {
 public:
  explicit TupleTable(std::size_t arity = 0) : arity_(arity) {}

  std::size_t arity() const { return arity_; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  // Returns (row id, inserted).
  std::pair<std::uint32_t, bool> insert(const Value* t);
  std::pair<std::uint32_t, bool> insert(std::span<const Value> t) { return insert(t.data()); }
  // Row id or -1.
  std::int64_t find(const Value* t) const;
  bool contains(std::span<const Value> t) const { return find(t.data()) >= 0; }

  const Value* row(std::size_t i) const { return data_.data() + i * arity_; }
  Tuple tuple(std::size_t i) const { return Tuple(row(i), row(i) + arity_); }

  void reserve(std::size_t rows);
  // Moves the rows out, leaving the table empty.
  RowArena release();

 private:
  bool equal(std::uint32_t row_id, const Value* t) const;
  void grow();

  std::size_t arity_;
  std::size_t size_ = 0;
  std::vector<Value> data_;
  std::vector<std::uint32_t> slots_;
};

// Rows of a table grouped by a projection (key columns), laid out contiguously.
class GroupIndex {
 public:
  GroupIndex() = default;
  explicit GroupIndex(std::vector<std::size_t> key_columns)
      : key_columns_(std::move(key_columns)), keys_(key_columns_.size()) {}

  // Two-phase build: count every row, then place every row. count() returns the
  // row's group, which place_in() accepts to skip a second lookup.
  std::uint32_t count(const Value* row);
  void finish_counting();
  void place(const Value* row, std::uint32_t row_id);
  void place_in(std::uint32_t group, std::uint32_t row_id) { rows_[fill_[group]++] = row_id; }

  // Convenience one-shot build over the given rows of `table`.
  static GroupIndex build(const TupleTable& table, const std::vector<std::uint32_t>& rows,
                          std::vector<std::size_t> key_columns);

  std::span<const std::uint32_t> lookup(const Value* key) const;
  const std::vector<std::size_t>& key_columns() const { return key_columns_; }
  std::size_t num_groups() const { return keys_.size(); }

 private:
  std::uint32_t group_of_row(const Value* row, bool create);

  std::vector<std::size_t> key_columns_;
  TupleTable keys_;
  std::vector<std::uint32_t> offsets_;  // size num_groups + 1 after finish_counting
  std::vector<std::uint32_t> fill_;
  std::vector<std::uint32_t> rows_;
  Tuple scratch_;
};

}  // namespace ucq
