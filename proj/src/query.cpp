#include "ucqlab/query.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace ucq {

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : QueryError(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  if (!alpha(s[0])) return false;
  return std::all_of(s.begin(), s.end(), [&](char c) { return alpha(c) || (c >= '0' && c <= '9'); });
}

ConjunctiveQuery::ConjunctiveQuery(std::string name, std::vector<std::string> head,
                                   std::vector<Atom> body)
    : name_(std::move(name)), head_(std::move(head)) {
  if (body.empty()) throw QueryError("query " + name_ + " has an empty body");
  std::set<Atom> seen;
  for (auto& atom : body) {
    if (atom.args.empty()) throw QueryError("atom " + atom.relation + " has no arguments");
    if (seen.insert(atom).second) body_.push_back(std::move(atom));
  }
  std::map<std::string, std::size_t> arity;
  for (const auto& atom : body_) {
    auto [it, fresh] = arity.emplace(atom.relation, atom.arity());
    if (!fresh && it->second != atom.arity()) {
      throw QueryError("relation " + atom.relation + " used with arities " +
                       std::to_string(it->second) + " and " + std::to_string(atom.arity()));
    }
    VarMask m = 0;
    for (const auto& t : atom.args) {
      if (!t.is_variable()) continue;
      auto pos = std::find(variables_.begin(), variables_.end(), t.text);
      if (pos == variables_.end()) {
        if (variables_.size() == kMaxVariables) {
          throw QueryError("query " + name_ + " exceeds " + std::to_string(kMaxVariables) +
                           " variables");
        }
        variables_.push_back(t.text);
        pos = variables_.end() - 1;
      }
      m |= bit(static_cast<std::size_t>(pos - variables_.begin()));
    }
    atom_masks_.push_back(m);
  }
  std::set<std::string> head_seen;
  for (const auto& v : head_) {
    if (!head_seen.insert(v).second) throw QueryError("head variable " + v + " repeated");
    auto idx = index_of(v);
    if (!idx) throw QueryError("head variable " + v + " does not occur in the body of " + name_);
    free_mask_ |= bit(*idx);
  }
}

std::optional<std::size_t> ConjunctiveQuery::index_of(const std::string& var) const {
  auto it = std::find(variables_.begin(), variables_.end(), var);
  if (it == variables_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - variables_.begin());
}

std::size_t ConjunctiveQuery::require_index(const std::string& var) const {
  auto idx = index_of(var);
  if (!idx) throw QueryError("variable " + var + " not in query " + name_);
  return *idx;
}

VarMask ConjunctiveQuery::all_mask() const {
  return variables_.size() == 64 ? ~VarMask{0} : bit(variables_.size()) - 1;
}

VarMask ConjunctiveQuery::mask_of(const std::vector<std::string>& vars) const {
  VarMask m = 0;
  for (const auto& v : vars) m |= bit(require_index(v));
  return m;
}

std::vector<std::string> ConjunctiveQuery::names_of(VarMask m) const {
  std::vector<std::string> out;
  for_each_member(m, [&](std::size_t i) { out.push_back(variables_[i]); });
  return out;
}

ConjunctiveQuery ConjunctiveQuery::with_head(std::vector<std::string> head) const {
  return ConjunctiveQuery(name_, std::move(head), body_);
}

ConjunctiveQuery ConjunctiveQuery::with_atoms_appended(const std::vector<Atom>& extra) const {
  auto body = body_;
  body.insert(body.end(), extra.begin(), extra.end());
  return ConjunctiveQuery(name_, head_, std::move(body));
}

UnionQuery::UnionQuery(std::vector<ConjunctiveQuery> disjuncts) : disjuncts_(std::move(disjuncts)) {
  if (disjuncts_.empty()) throw QueryError("a union needs at least one disjunct");
  std::map<std::string, std::size_t> arity;
  for (const auto& q : disjuncts_) {
    for (const auto& atom : q.body()) {
      auto [it, fresh] = arity.emplace(atom.relation, atom.arity());
      if (!fresh && it->second != atom.arity()) {
        throw QueryError("relation " + atom.relation + " used with arities " +
                         std::to_string(it->second) + " and " + std::to_string(atom.arity()));
      }
    }
  }
  std::set<std::string> first(head().begin(), head().end());
  for (const auto& q : disjuncts_) {
    if (std::set<std::string>(q.head().begin(), q.head().end()) != first) {
      throw QueryError("disjunct " + q.name() + " has a different set of head variables");
    }
  }
}

std::vector<std::string> UnionQuery::relation_symbols() const {
  std::set<std::string> out;
  for (const auto& q : disjuncts_)
    for (const auto& a : q.body()) out.insert(a.relation);
  return {out.begin(), out.end()};
}

bool is_self_join_free(const ConjunctiveQuery& q) {
  std::set<std::string> seen;
  for (const auto& a : q.body())
    if (!seen.insert(a.relation).second) return false;
  return true;
}

UnionQuery align_heads(const UnionQuery& u) {
  std::vector<ConjunctiveQuery> out;
  for (const auto& q : u.disjuncts()) out.push_back(q.head() == u.head() ? q : q.with_head(u.head()));
  return UnionQuery(std::move(out));
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  bool peek(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool peek_quote() {
    skip_space();
    return pos_ < text_.size() && (text_[pos_] == '\'' || text_[pos_] == '"');
  }

  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    advance();
  }

  void expect_implies() {
    skip_space();
    if (text_.compare(pos_, 2, ":-") != 0) fail("expected ':-'");
    advance();
    advance();
  }

  std::string identifier(const char* what) {
    skip_space();
    std::size_t start = pos_;
    auto ok = [](char c, bool first) {
      return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
             (!first && c >= '0' && c <= '9');
    };
    while (pos_ < text_.size() && ok(text_[pos_], pos_ == start)) advance();
    if (pos_ == start) fail(std::string("expected ") + what);
    return text_.substr(start, pos_ - start);
  }

  std::string quoted() {
    skip_space();
    char quote = text_[pos_];
    advance();
    std::string out;
    while (true) {
      if (pos_ >= text_.size()) fail("unterminated constant");
      char c = text_[pos_];
      advance();
      if (c == quote) break;
      if (c == '\\') {
        if (pos_ >= text_.size()) fail("unterminated escape");
        c = text_[pos_];
        advance();
      }
      out.push_back(c);
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, column_); }

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

ConjunctiveQuery parse_cq(Lexer& lex) {
  std::size_t line = 0, col = 0;
  lex.skip_space();
  line = lex.line();
  col = lex.column();
  std::string name = lex.identifier("query name");
  lex.expect('(');
  std::vector<std::string> head;
  if (!lex.peek(')')) {
    head.push_back(lex.identifier("head variable"));
    while (lex.peek(',')) {
      lex.expect(',');
      head.push_back(lex.identifier("head variable"));
    }
  }
  lex.expect(')');
  lex.expect_implies();
  std::vector<Atom> body;
  do {
    if (!body.empty()) lex.expect(',');
    Atom atom;
    atom.relation = lex.identifier("relation symbol");
    lex.expect('(');
    do {
      if (!atom.args.empty()) lex.expect(',');
      if (lex.peek_quote()) {
        atom.args.push_back(Term::constant(lex.quoted()));
      } else {
        atom.args.push_back(Term::variable(lex.identifier("term")));
      }
    } while (lex.peek(','));
    lex.expect(')');
    body.push_back(std::move(atom));
  } while (lex.peek(','));
  lex.expect('.');
  try {
    return ConjunctiveQuery(std::move(name), std::move(head), std::move(body));
  } catch (const ParseError&) {
    throw;
  } catch (const QueryError& e) {
    throw ParseError(e.what(), line, col);
  }
}

std::string quote_constant(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

}  // namespace

UnionQuery parse_query(const std::string& text) {
  Lexer lex(text);
  std::vector<ConjunctiveQuery> cqs;
  while (!lex.at_end()) cqs.push_back(parse_cq(lex));
  if (cqs.empty()) throw ParseError("no query found", lex.line(), lex.column());
  return UnionQuery(std::move(cqs));
}

std::string print_query(const ConjunctiveQuery& q) {
  std::ostringstream out;
  out << q.name() << "(";
  for (std::size_t i = 0; i < q.head().size(); ++i) out << (i ? "," : "") << q.head()[i];
  out << ") :- ";
  for (std::size_t i = 0; i < q.body().size(); ++i) {
    const auto& atom = q.body()[i];
    out << (i ? ", " : "") << atom.relation << "(";
    for (std::size_t j = 0; j < atom.args.size(); ++j) {
      const auto& t = atom.args[j];
      out << (j ? "," : "") << (t.is_variable() ? t.text : quote_constant(t.text));
    }
    out << ")";
  }
  out << ".";
  return out.str();
}

std::string print_query(const UnionQuery& u) {
  std::string out;
  for (const auto& q : u.disjuncts()) out += print_query(q) + "\n";
  return out;
}

}  // namespace ucq
