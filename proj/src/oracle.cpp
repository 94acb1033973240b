// Bottom-up evaluation of the stratified least model. Shares nothing with the
// SLD prover beyond the term types, so the two can check each other.

#include <algorithm>
#include <map>

#include "lawtrace/engine.hpp"

namespace lawtrace {

namespace {

using Bindings = std::map<std::string, Term>;
using Model = std::map<PredicateKey, std::set<Term>>;

Term substitute(const Term& t, const Bindings& b) {
  if (t.is_variable()) {
    auto it = b.find(t.name());
    return it == b.end() ? t : it->second;
  }
  if (t.is_atom()) return t;
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(substitute(a, b));
  return Term::compound(t.name(), std::move(args));
}

// Extends `b` so that pattern matches the ground atom, or returns false.
bool match(const Term& pattern, const Term& ground, Bindings& b) {
  if (pattern.is_variable()) {
    auto [it, inserted] = b.emplace(pattern.name(), ground);
    return inserted || it->second == ground;
  }
  if (pattern.name() != ground.name() || pattern.arity() != ground.arity()) return false;
  for (std::size_t i = 0; i < pattern.arity(); ++i) {
    if (!match(pattern.arg(i), ground.arg(i), b)) return false;
  }
  return true;
}

bool holds(const Model& model, const Term& ground) {
  auto it = model.find(predicate_of(ground));
  return it != model.end() && it->second.contains(ground);
}

class StratumEvaluator {
 public:
  StratumEvaluator(const Model& model, const std::vector<Term>& universe) : model_(model), universe_(universe) {}

  // Every ground head instance whose body holds in the model.
  void fire(const Clause& rule, std::vector<Term>& out) const {
    Bindings b;
    join(rule, 0, b, out);
  }

 private:
  void join(const Clause& rule, std::size_t i, Bindings& b, std::vector<Term>& out) const {
    while (i < rule.body.size() && rule.body[i].negated) ++i;
    if (i == rule.body.size()) {
      auto unbound = rule.head.variables();
      std::erase_if(unbound, [&](const std::string& v) { return b.contains(v); });
      enumerate(rule, unbound, 0, b, out);
      return;
    }
    auto it = model_.find(predicate_of(rule.body[i].term));
    if (it == model_.end()) return;
    for (const Term& atom : it->second) {
      Bindings extended = b;
      if (match(rule.body[i].term, atom, extended)) join(rule, i + 1, extended, out);
    }
  }

  // Head-only variables range over the active domain.
  void enumerate(const Clause& rule, const std::vector<std::string>& unbound, std::size_t k, Bindings& b,
                 std::vector<Term>& out) const {
    if (k == unbound.size()) {
      for (const auto& lit : rule.body) {
        if (lit.negated && holds(model_, substitute(lit.term, b))) return;
      }
      out.push_back(substitute(rule.head, b));
      return;
    }
    for (const Term& c : universe_) {
      b[unbound[k]] = c;
      enumerate(rule, unbound, k + 1, b, out);
    }
    b.erase(unbound[k]);
  }

  const Model& model_;
  const std::vector<Term>& universe_;
};

}  // namespace

std::set<Term> ground_oracle(const KnowledgeBase& kb, const CaseFacts& facts) {
  std::set<std::string> names = kb.constants();
  names.merge(facts.constants());
  std::vector<Term> universe;
  for (const auto& n : names) universe.push_back(Term::atom(n));

  Model model;
  for (const auto& f : facts.terms()) model[predicate_of(f)].insert(f);

  for (const auto& stratum : kb.strata()) {
    std::vector<const Clause*> rules;
    for (const auto& c : kb.clauses()) {
      if (std::binary_search(stratum.begin(), stratum.end(), predicate_of(c.head))) rules.push_back(&c);
    }
    for (bool changed = true; changed;) {
      changed = false;
      std::vector<Term> derived;
      StratumEvaluator eval(model, universe);
      for (const Clause* rule : rules) eval.fire(*rule, derived);
      for (auto& atom : derived) {
        if (model[predicate_of(atom)].insert(std::move(atom)).second) changed = true;
      }
    }
  }

  std::set<Term> out;
  for (auto& [key, atoms] : model) out.insert(atoms.begin(), atoms.end());
  return out;
}

}  // namespace lawtrace
