#include "lawtrace/term.hpp"

#include <algorithm>

#include "text_cursor.hpp"

namespace lawtrace {

Term Term::atom(std::string name) {
  Term t;
  t.name_ = std::move(name);
  return t;
}

Term Term::variable(std::string name) {
  Term t;
  t.name_ = std::move(name);
  t.variable_ = true;
  return t;
}

Term Term::compound(std::string functor, std::vector<Term> args) {
  Term t;
  t.name_ = std::move(functor);
  t.args_ = std::move(args);
  return t;
}

bool Term::is_ground() const {
  if (variable_) return false;
  return std::all_of(args_.begin(), args_.end(), [](const Term& a) { return a.is_ground(); });
}

void Term::collect_variables(std::vector<std::string>& out) const {
  if (variable_) {
    if (std::find(out.begin(), out.end(), name_) == out.end()) out.push_back(name_);
    return;
  }
  for (const auto& a : args_) a.collect_variables(out);
}

std::vector<std::string> Term::variables() const {
  std::vector<std::string> out;
  collect_variables(out);
  return out;
}

void Term::collect_constants(std::set<std::string>& out) const {
  for (const auto& a : args_) {
    if (a.is_atom()) out.insert(a.name_);
    a.collect_constants(out);
  }
}

bool Term::has_nested_compound() const {
  return std::any_of(args_.begin(), args_.end(), [](const Term& a) { return a.is_compound(); });
}

std::string Term::to_string() const {
  if (args_.empty()) return name_;
  std::string out = name_;
  out.push_back('(');
  for (std::size_t i = 0; i < args_.size(); ++i) {
    if (i) out += ", ";
    out += args_[i].to_string();
  }
  out.push_back(')');
  return out;
}

bool operator==(const Term& a, const Term& b) {
  return a.variable_ == b.variable_ && a.name_ == b.name_ && a.args_ == b.args_;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (auto c = a.variable_ <=> b.variable_; c != 0) return c;
  if (auto c = a.name_ <=> b.name_; c != 0) return c;
  if (auto c = a.args_.size() <=> b.args_.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.args_.size(); ++i) {
    if (auto c = a.args_[i] <=> b.args_[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::string PredicateKey::to_string() const { return name + "/" + std::to_string(arity); }

PredicateKey predicate_of(const Term& t) { return {t.name(), t.arity()}; }

std::string Literal::to_string() const {
  return negated ? "not(" + term.to_string() + ")" : term.to_string();
}

bool is_identifier_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

bool is_identifier_char(char c) { return is_identifier_start(c) || (c >= '0' && c <= '9') || c == '_'; }

bool is_atom_name(std::string_view s) {
  return !s.empty() && s.front() >= 'a' && s.front() <= 'z' &&
         std::all_of(s.begin(), s.end(), is_identifier_char);
}

bool is_variable_name(std::string_view s) {
  return !s.empty() && s.front() >= 'A' && s.front() <= 'Z' &&
         std::all_of(s.begin(), s.end(), is_identifier_char);
}

Term parse_term(std::string_view text) {
  detail::TextCursor cursor(text);
  Term t = cursor.read_term();
  cursor.skip_spaces();
  if (!cursor.at_end()) cursor.fail(std::string("unexpected '") + cursor.peek() + "' after term");
  return t;
}

Literal parse_literal(std::string_view text) {
  Term t = parse_term(text);
  if (t.name() == "not" && t.arity() == 1 && !t.arg(0).is_variable()) return {t.arg(0), true};
  return {std::move(t), false};
}

}  // namespace lawtrace
