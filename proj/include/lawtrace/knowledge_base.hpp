#ifndef LAWTRACE_KNOWLEDGE_BASE_HPP
#define LAWTRACE_KNOWLEDGE_BASE_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lawtrace/term.hpp"

namespace lawtrace {

/// A legal source such as `directive_2010_64`. The jurisdiction is carried
/// explicitly instead of being implied by an id suffix.
struct LegalSourceId {
  std::string id;
  std::string jurisdiction_label;

  friend bool operator==(const LegalSourceId&, const LegalSourceId&) = default;
};

struct Clause {
  Term head;
  std::vector<Literal> body;
  std::string source;      // LegalSourceId::id, empty when undeclared
  std::string article_id;  // empty when unannotated
  std::string display_title;

  bool is_fact() const { return body.empty() && head.is_ground(); }
  /// `head :- b1, not(b2).` on one line.
  std::string to_string() const;

  friend bool operator==(const Clause&, const Clause&) = default;
};

/// Throws SafetyError unless every variable of a negated body literal occurs
/// in the head or in an earlier positive body literal.
void check_safety(const Clause& clause, std::size_t line = 0);

/// Splits the predicates of `clauses` into strata so that a predicate only
/// depends negatively on strictly lower strata. Throws StratificationError
/// naming one offending cycle.
std::vector<std::vector<PredicateKey>> stratify(std::span<const Clause> clauses);

/// An immutable, validated logic program with its legal metadata.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;
  /// Validates safety, stratification and metadata consistency.
  KnowledgeBase(std::vector<LegalSourceId> sources, std::vector<Clause> clauses,
                std::map<std::string, std::string> article_titles);

  const std::vector<Clause>& clauses() const { return clauses_; }
  /// Sorted by id.
  const std::vector<LegalSourceId>& sources() const { return sources_; }
  const std::map<std::string, std::string>& article_titles() const { return article_titles_; }
  const std::vector<std::vector<PredicateKey>>& strata() const { return strata_; }

  bool empty() const { return clauses_.empty() && sources_.empty() && article_titles_.empty(); }
  const LegalSourceId* find_source(std::string_view id) const;
  std::optional<std::string> title_of(std::string_view article_id) const;
  /// Indices into clauses(), in textual order.
  std::span<const std::size_t> clauses_for(const PredicateKey& key) const;
  /// Every atom occurring in a clause.
  std::set<std::string> constants() const;

  /// The sub-program made of the clauses of one source.
  KnowledgeBase restricted_to(std::string_view source_id) const;

  friend bool operator==(const KnowledgeBase& a, const KnowledgeBase& b) {
    return a.sources_ == b.sources_ && a.clauses_ == b.clauses_ &&
           a.article_titles_ == b.article_titles_;
  }

 private:
  std::vector<LegalSourceId> sources_;
  std::vector<Clause> clauses_;
  std::map<std::string, std::string> article_titles_;
  std::map<PredicateKey, std::vector<std::size_t>> index_;
  std::vector<std::vector<PredicateKey>> strata_;
};

/// Concatenates programs in order. Sources and titles must agree.
KnowledgeBase merge(std::span<const KnowledgeBase> parts);

/// The ground facts of one case. Duplicates collapse.
class CaseFacts {
 public:
  CaseFacts() = default;
  /// Throws Error on a non-ground or nested term.
  explicit CaseFacts(std::set<Term> facts);

  const std::set<Term>& terms() const { return facts_; }
  std::size_t size() const { return facts_.size(); }
  bool empty() const { return facts_.empty(); }
  bool contains(const Term& t) const { return facts_.contains(t); }
  /// A copy with one more fact.
  CaseFacts with(Term fact) const;
  std::set<std::string> constants() const;

  friend bool operator==(const CaseFacts&, const CaseFacts&) = default;

 private:
  std::set<Term> facts_;
};

/// Parses the rule DSL: Prolog-style clauses ending in `.`, `not(...)` for
/// negation, `%` comments and `%% key: value` metadata lines. Metadata keys
/// are `source`, `jurisdiction`, `article` and `title`; `source` and
/// `article` stay in effect until redeclared.
KnowledgeBase parse_rules(std::string_view text);

/// Parses `.`-terminated ground terms, one per line.
CaseFacts parse_facts(std::string_view text);

std::string serialize_rules(const KnowledgeBase& kb);
std::string serialize_facts(const CaseFacts& facts);

}  // namespace lawtrace

#endif  // LAWTRACE_KNOWLEDGE_BASE_HPP
