#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ucqlab/tuple_table.hpp"

namespace ucq {

class DatabaseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConstantPool {
 public:
  Value intern(std::string_view text);
  std::optional<Value> find(std::string_view text) const;
  const std::string& name(Value v) const { return names_.at(v); }
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Value> ids_;
};

class Relation {
 public:
  explicit Relation(std::size_t arity) : table_(arity) {}

  std::size_t arity() const { return table_.arity(); }
  std::size_t size() const { return table_.size(); }
  bool empty() const { return table_.empty(); }

  bool insert(std::span<const Value> t);
  bool contains(std::span<const Value> t) const { return table_.contains(t); }
  const Value* row(std::size_t i) const { return table_.row(i); }
  Tuple tuple(std::size_t i) const { return table_.tuple(i); }
  const TupleTable& table() const { return table_; }

  // Neighbor lookup: rows grouped by the given columns.
  GroupIndex index_on(std::vector<std::size_t> columns) const;

 private:
  TupleTable table_;
};

class Database {
 public:
  ConstantPool& pool() { return pool_; }
  const ConstantPool& pool() const { return pool_; }

  // Creates the relation, or returns the existing one when arities agree.
  Relation& add_relation(const std::string& name, std::size_t arity);
  const Relation* find(const std::string& name) const;
  Relation* find(const std::string& name);

  bool insert(const std::string& relation, const std::vector<std::string>& values);

  const std::map<std::string, Relation>& relations() const { return relations_; }
  std::size_t total_tuples() const;

  Tuple intern_tuple(const std::vector<std::string>& values);
  std::vector<std::string> decode(const Tuple& t) const;

 private:
  ConstantPool pool_;
  std::map<std::string, Relation> relations_;
};

// Directory of `<Relation>.csv` files (no header); optional `db.toml` with
// `Relation = arity` lines fixes arities and declares empty relations.
Database load_database(const std::filesystem::path& dir);
void save_database(const Database& d, const std::filesystem::path& dir);

std::string format_csv_row(const Database& d, const Tuple& t);

}  // namespace ucq
