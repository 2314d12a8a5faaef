#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ucqlab/varset.hpp"

namespace ucq {

struct Term {
  enum class Kind : std::uint8_t { kVariable, kConstant };

  Kind kind = Kind::kVariable;
  std::string text;

  static Term variable(std::string name) { return {Kind::kVariable, std::move(name)}; }
  static Term constant(std::string value) { return {Kind::kConstant, std::move(value)}; }

  bool is_variable() const { return kind == Kind::kVariable; }
  bool is_constant() const { return kind == Kind::kConstant; }

  auto operator<=>(const Term&) const = default;
};

struct Atom {
  std::string relation;
  std::vector<Term> args;

  std::size_t arity() const { return args.size(); }
  auto operator<=>(const Atom&) const = default;
};

// Semantic violations of the query invariants (arity clashes, unsafe heads...).
class QueryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public QueryError {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class ConjunctiveQuery {
 public:
  // Validates the CQ invariants and collapses duplicate atoms (first copy kept).
  ConjunctiveQuery(std::string name, std::vector<std::string> head, std::vector<Atom> body);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& head() const { return head_; }
  const std::vector<Atom>& body() const { return body_; }

  // var(Q) in order of first occurrence in the body; indices feed VarMask.
  const std::vector<std::string>& variables() const { return variables_; }
  std::size_t num_variables() const { return variables_.size(); }
  std::optional<std::size_t> index_of(const std::string& var) const;
  std::size_t require_index(const std::string& var) const;

  VarMask free_mask() const { return free_mask_; }
  VarMask all_mask() const;
  // Variable set of the i-th atom (constants dropped).
  VarMask atom_mask(std::size_t i) const { return atom_masks_[i]; }

  VarMask mask_of(const std::vector<std::string>& vars) const;
  std::vector<std::string> names_of(VarMask m) const;

  bool is_boolean() const { return head_.empty(); }
  ConjunctiveQuery with_head(std::vector<std::string> head) const;
  ConjunctiveQuery with_atoms_appended(const std::vector<Atom>& extra) const;

  friend bool operator==(const ConjunctiveQuery& a, const ConjunctiveQuery& b) {
    return a.name_ == b.name_ && a.head_ == b.head_ && a.body_ == b.body_;
  }

 private:
  std::string name_;
  std::vector<std::string> head_;
  std::vector<Atom> body_;
  std::vector<std::string> variables_;
  std::vector<VarMask> atom_masks_;
  VarMask free_mask_ = 0;
};

class UnionQuery {
 public:
  explicit UnionQuery(std::vector<ConjunctiveQuery> disjuncts);

  const std::vector<ConjunctiveQuery>& disjuncts() const { return disjuncts_; }
  std::size_t size() const { return disjuncts_.size(); }
  const ConjunctiveQuery& operator[](std::size_t i) const { return disjuncts_[i]; }

  // Answer tuples of a union follow the first disjunct's head order.
  const std::vector<std::string>& head() const { return disjuncts_.front().head(); }

  std::vector<std::string> relation_symbols() const;

  friend bool operator==(const UnionQuery&, const UnionQuery&) = default;

 private:
  std::vector<ConjunctiveQuery> disjuncts_;
};

UnionQuery parse_query(const std::string& text);
std::string print_query(const ConjunctiveQuery& q);
std::string print_query(const UnionQuery& u);

bool is_self_join_free(const ConjunctiveQuery& q);

// Reorders every disjunct's head to match the first disjunct's head.
UnionQuery align_heads(const UnionQuery& u);

bool is_identifier(const std::string& s);

}  // namespace ucq
