#include "ucqlab/tuple_table.hpp"

#include <algorithm>
#include <stdexcept>

namespace ucq {

bool TupleTable::equal(std::uint32_t row_id, const Value* t) const {
  return std::equal(t, t + arity_, row(row_id));
}

void TupleTable::reserve(std::size_t rows) {
  data_.reserve(rows * arity_);
  std::size_t want = 16;
  while (want < rows * 2) want <<= 1;
  if (want <= slots_.size()) return;
  slots_.assign(want, 0);
  const std::size_t mask = want - 1;
  for (std::uint32_t r = 0; r < size_; ++r) {
    std::size_t i = hash_values(row(r), arity_) & mask;
    while (slots_[i] != 0) i = (i + 1) & mask;
    slots_[i] = r + 1;
  }
}

RowArena TupleTable::release() {
  RowArena out(arity_, std::move(data_));
  // A zero-arity set holds at most the empty tuple.
  if (arity_ == 0 && size_ > 0) out.push(nullptr);
  data_.clear();
  slots_.clear();
  size_ = 0;
  return out;
}

void TupleTable::grow() { reserve(std::max<std::size_t>(8, size_ * 2)); }

std::pair<std::uint32_t, bool> TupleTable::insert(const Value* t) {
  if ((size_ + 1) * 2 > slots_.size()) grow();
  const std::size_t mask = slots_.size() - 1;
  std::size_t i = hash_values(t, arity_) & mask;
  while (slots_[i] != 0) {
    if (equal(slots_[i] - 1, t)) return {slots_[i] - 1, false};
    i = (i + 1) & mask;
  }
  if (size_ >= 0xFFFFFFFEu) throw std::length_error("tuple table overflow");
  data_.insert(data_.end(), t, t + arity_);
  slots_[i] = static_cast<std::uint32_t>(++size_);
  return {static_cast<std::uint32_t>(size_ - 1), true};
}

std::int64_t TupleTable::find(const Value* t) const {
  if (slots_.empty()) return -1;
  const std::size_t mask = slots_.size() - 1;
  std::size_t i = hash_values(t, arity_) & mask;
  while (slots_[i] != 0) {
    if (equal(slots_[i] - 1, t)) return slots_[i] - 1;
    i = (i + 1) & mask;
  }
  return -1;
}

std::uint32_t GroupIndex::group_of_row(const Value* row, bool create) {
  scratch_.resize(key_columns_.size());
  for (std::size_t k = 0; k < key_columns_.size(); ++k) scratch_[k] = row[key_columns_[k]];
  if (create) return keys_.insert(scratch_.data()).first;
  return static_cast<std::uint32_t>(keys_.find(scratch_.data()));
}

std::uint32_t GroupIndex::count(const Value* row) {
  std::uint32_t g = group_of_row(row, true);
  if (g >= fill_.size()) fill_.resize(g + 1, 0);
  ++fill_[g];
  return g;
}

void GroupIndex::finish_counting() {
  offsets_.assign(keys_.size() + 1, 0);
  for (std::size_t g = 0; g < keys_.size(); ++g) offsets_[g + 1] = offsets_[g] + fill_[g];
  rows_.assign(offsets_.back(), 0);
  fill_.assign(offsets_.begin(), offsets_.end() - 1);
}

void GroupIndex::place(const Value* row, std::uint32_t row_id) {
  std::uint32_t g = group_of_row(row, false);
  rows_[fill_[g]++] = row_id;
}

GroupIndex GroupIndex::build(const TupleTable& table, const std::vector<std::uint32_t>& rows,
                             std::vector<std::size_t> key_columns) {
  GroupIndex index(std::move(key_columns));
  std::vector<std::uint32_t> group;
  group.reserve(rows.size());
  for (std::uint32_t r : rows) group.push_back(index.count(table.row(r)));
  index.finish_counting();
  for (std::size_t i = 0; i < rows.size(); ++i) index.place_in(group[i], rows[i]);
  return index;
}

std::span<const std::uint32_t> GroupIndex::lookup(const Value* key) const {
  std::int64_t g = keys_.find(key);
  if (g < 0) return {};
  return {rows_.data() + offsets_[g], rows_.data() + offsets_[g + 1]};
}

}  // namespace ucq
