#ifndef LAWTRACE_TERM_HPP
#define LAWTRACE_TERM_HPP

#include <compare>
#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lawtrace {

/// A first-order term: a variable, an atom (compound of arity 0) or a compound.
///
/// Variables start with an uppercase letter, atoms and functors with a
/// lowercase one. The canonical text form puts exactly one space after each
/// argument comma and nothing else, e.g. `has_right(art3_1, mario, X)`.
class Term {
 public:
  Term() = default;

  static Term atom(std::string name);
  static Term variable(std::string name);
  static Term compound(std::string functor, std::vector<Term> args);

  bool is_variable() const { return variable_; }
  bool is_atom() const { return !variable_ && args_.empty(); }
  bool is_compound() const { return !variable_ && !args_.empty(); }

  /// Functor for atoms and compounds, the variable name otherwise.
  const std::string& name() const { return name_; }
  std::span<const Term> args() const { return args_; }
  std::size_t arity() const { return args_.size(); }
  const Term& arg(std::size_t i) const { return args_.at(i); }

  bool is_ground() const;
  /// Variable names in first-occurrence order, without repeats.
  std::vector<std::string> variables() const;
  void collect_variables(std::vector<std::string>& out) const;
  /// Every atom name occurring in argument position (recursively).
  void collect_constants(std::set<std::string>& out) const;
  /// True when some argument is itself a compound term.
  bool has_nested_compound() const;

  std::string to_string() const;

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  std::string name_;
  std::vector<Term> args_;
  bool variable_ = false;
};

/// name/arity pair identifying a predicate.
struct PredicateKey {
  std::string name;
  std::size_t arity = 0;

  std::string to_string() const;
  friend bool operator==(const PredicateKey&, const PredicateKey&) = default;
  friend std::strong_ordering operator<=>(const PredicateKey& a, const PredicateKey& b) {
    if (auto c = a.name <=> b.name; c != 0) return c;
    return a.arity <=> b.arity;
  }
};

PredicateKey predicate_of(const Term& t);

/// A body literal; `negated` marks negation as failure, written `not(...)`.
struct Literal {
  Term term;
  bool negated = false;

  std::string to_string() const;
  friend bool operator==(const Literal&, const Literal&) = default;
};

bool is_identifier_start(char c);
bool is_identifier_char(char c);
/// Matches [a-z][A-Za-z0-9_]*.
bool is_atom_name(std::string_view s);
/// Matches [A-Z][A-Za-z0-9_]*.
bool is_variable_name(std::string_view s);

/// Parses a complete term; surrounding whitespace is allowed. Throws ParseError.
Term parse_term(std::string_view text);

/// Parses `not(T)` as a negated literal, anything else as a positive one.
Literal parse_literal(std::string_view text);

}  // namespace lawtrace

#endif  // LAWTRACE_TERM_HPP
