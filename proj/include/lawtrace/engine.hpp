#ifndef LAWTRACE_ENGINE_HPP
#define LAWTRACE_ENGINE_HPP

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lawtrace/knowledge_base.hpp"
#include "lawtrace/term.hpp"

namespace lawtrace {

/// Ground bindings for the variables of a query.
struct Substitution {
  std::map<std::string, Term> bindings;

  Term apply(const Term& t) const;
  friend bool operator==(const Substitution&, const Substitution&) = default;
};

enum class Justification { kRule, kFact, kNaf };

/// Derivation of one literal. FACT and NAF nodes are leaves; a RULE node has
/// one child per body literal of the applied clause, in body order.
struct ProofTree {
  Literal literal;
  Justification justification = Justification::kFact;
  std::string article_id;        // RULE only
  std::size_t clause_index = 0;  // RULE only: index into KnowledgeBase::clauses()
  std::vector<ProofTree> children;

  bool contains_naf() const;
  std::size_t height() const;
  friend bool operator==(const ProofTree&, const ProofTree&) = default;
};

struct Solution {
  Substitution substitution;
  ProofTree proof;
  friend bool operator==(const Solution&, const Solution&) = default;
};

struct SolveOptions {
  std::size_t depth_limit = 64;
};

/// SLD resolution with negation as failure.
///
/// Case facts are tried before clauses; clauses in textual order; body
/// literals left to right. A negated literal must be ground when selected.
/// Returns one entry per distinct derivation. Throws EngineError on a
/// non-ground negation, a non-ground answer or when the depth limit is hit.
std::vector<Solution> solve(const Term& goal, const KnowledgeBase& kb, const CaseFacts& facts,
                            const SolveOptions& options = {});

/// True when solve() finds at least one derivation.
bool provable(const Term& goal, const KnowledgeBase& kb, const CaseFacts& facts,
              const SolveOptions& options = {});

/// One primary right with the auxiliary rights and properties attached to it.
struct RightsBundle {
  LegalSourceId source;
  ProofTree primary;  // has_right(Right, Tag, Article, Person, Option)
  std::string option;
  std::vector<ProofTree> auxiliaries;  // auxiliary_right(Aux, Article, Person, Type, Value)
  std::vector<ProofTree> properties;   // right_property(Prop, Article, Person, Type, Value)

  /// Article of the primary right.
  std::string article() const;
  friend bool operator==(const RightsBundle&, const RightsBundle&) = default;
};

/// All rights of `person` under one legal source, using only that source's clauses.
std::vector<RightsBundle> derive_rights(std::string_view person, std::string_view source,
                                        const KnowledgeBase& kb, const CaseFacts& facts);

/// Stratified least model, computed bottom-up stratum by stratum over the
/// constants of kb and facts. Used as an independent check of solve().
std::set<Term> ground_oracle(const KnowledgeBase& kb, const CaseFacts& facts);

}  // namespace lawtrace

#endif  // LAWTRACE_ENGINE_HPP
