#include "lawtrace/engine.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

#include "lawtrace/errors.hpp"

namespace lawtrace {

Term Substitution::apply(const Term& t) const {
  if (t.is_variable()) {
    auto it = bindings.find(t.name());
    return it == bindings.end() ? t : it->second;
  }
  if (t.is_atom()) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const auto& a : t.args()) args.push_back(apply(a));
  return Term::compound(t.name(), std::move(args));
}

bool ProofTree::contains_naf() const {
  return justification == Justification::kNaf ||
         std::any_of(children.begin(), children.end(), [](const ProofTree& c) { return c.contains_naf(); });
}

std::size_t ProofTree::height() const {
  std::size_t h = 0;
  for (const auto& c : children) h = std::max(h, c.height() + 1);
  return h;
}

namespace {

class Prover {
 public:
  using Sink = std::function<bool(ProofTree)>;

  Prover(const KnowledgeBase& kb, const CaseFacts& facts, std::size_t depth_limit)
      : kb_(kb), depth_limit_(depth_limit) {
    for (const auto& f : facts.terms()) facts_by_predicate_[predicate_of(f)].push_back(&f);
  }

  // Returns false when the sink asked to stop.
  bool prove(const Literal& lit, std::size_t depth, const Sink& sink) {
    if (depth > depth_limit_) {
      throw EngineError(EngineError::Kind::kDepthLimit,
                        "depth limit " + std::to_string(depth_limit_) + " exceeded at goal " +
                            resolve(lit.term).to_string());
    }
    if (lit.negated) return prove_negation(lit, depth, sink);

    const PredicateKey key = predicate_of(lit.term);
    if (auto it = facts_by_predicate_.find(key); it != facts_by_predicate_.end()) {
      for (const Term* fact : it->second) {
        std::size_t mark = trail_.size();
        bool go_on = true;
        if (unify(lit.term, *fact)) go_on = sink(ProofTree{{*fact, false}, Justification::kFact, {}, 0, {}});
        undo(mark);
        if (!go_on) return false;
      }
    }
    for (std::size_t index : kb_.clauses_for(key)) {
      const Clause& clause = kb_.clauses()[index];
      const std::string suffix = "#" + std::to_string(++fresh_);
      Term head = rename(clause.head, suffix);
      std::size_t mark = trail_.size();
      bool go_on = true;
      if (unify(lit.term, head)) {
        std::vector<Literal> body;
        body.reserve(clause.body.size());
        for (const auto& b : clause.body) body.push_back({rename(b.term, suffix), b.negated});
        std::vector<ProofTree> children;
        go_on = prove_body(body, 0, depth + 1, children, [&] {
          return sink(ProofTree{{head, false}, Justification::kRule, clause.article_id, index, children});
        });
      }
      undo(mark);
      if (!go_on) return false;
    }
    return true;
  }

  Term resolve(const Term& t) const {
    if (t.is_variable()) {
      auto it = bindings_.find(t.name());
      return it == bindings_.end() ? t : resolve(it->second);
    }
    if (t.is_atom()) return t;
    std::vector<Term> args;
    args.reserve(t.arity());
    for (const auto& a : t.args()) args.push_back(resolve(a));
    return Term::compound(t.name(), std::move(args));
  }

  ProofTree resolve(const ProofTree& tree) const {
    ProofTree out{{resolve(tree.literal.term), tree.literal.negated}, tree.justification,
                  tree.article_id, tree.clause_index, {}};
    out.children.reserve(tree.children.size());
    for (const auto& c : tree.children) out.children.push_back(resolve(c));
    return out;
  }

 private:
  bool prove_negation(const Literal& lit, std::size_t depth, const Sink& sink) {
    Term goal = resolve(lit.term);
    if (!goal.is_ground()) {
      throw EngineError(EngineError::Kind::kNafNonGround,
                        "negation as failure on non-ground literal not(" + goal.to_string() + ")");
    }
    bool found = false;
    prove({goal, false}, depth + 1, [&](const ProofTree&) {
      found = true;
      return false;
    });
    if (found) return true;
    return sink(ProofTree{{std::move(goal), true}, Justification::kNaf, {}, 0, {}});
  }

  bool prove_body(const std::vector<Literal>& body, std::size_t i, std::size_t depth,
                  std::vector<ProofTree>& done, const std::function<bool()>& on_success) {
    if (i == body.size()) return on_success();
    return prove(body[i], depth, [&](ProofTree tree) {
      done.push_back(std::move(tree));
      bool go_on = prove_body(body, i + 1, depth, done, on_success);
      done.pop_back();
      return go_on;
    });
  }

  static Term rename(const Term& t, const std::string& suffix) {
    if (t.is_variable()) return Term::variable(t.name() + suffix);
    if (t.is_atom()) return t;
    std::vector<Term> args;
    args.reserve(t.arity());
    for (const auto& a : t.args()) args.push_back(rename(a, suffix));
    return Term::compound(t.name(), std::move(args));
  }

  const Term& deref(const Term& t) const {
    const Term* cur = &t;
    while (cur->is_variable()) {
      auto it = bindings_.find(cur->name());
      if (it == bindings_.end()) break;
      cur = &it->second;
    }
    return *cur;
  }

  void bind(const std::string& var, const Term& value) {
    bindings_.emplace(var, value);
    trail_.push_back(var);
  }

  // No occurs check: programs are function-free.
  bool unify(const Term& left, const Term& right) {
    const Term& a = deref(left);
    const Term& b = deref(right);
    if (a.is_variable() && b.is_variable() && a.name() == b.name()) return true;
    if (a.is_variable()) {
      bind(a.name(), b);
      return true;
    }
    if (b.is_variable()) {
      bind(b.name(), a);
      return true;
    }
    if (a.name() != b.name() || a.arity() != b.arity()) return false;
    for (std::size_t i = 0; i < a.arity(); ++i) {
      if (!unify(a.arg(i), b.arg(i))) return false;
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      bindings_.erase(trail_.back());
      trail_.pop_back();
    }
  }

  const KnowledgeBase& kb_;
  std::size_t depth_limit_;
  std::map<PredicateKey, std::vector<const Term*>> facts_by_predicate_;
  std::unordered_map<std::string, Term> bindings_;
  std::vector<std::string> trail_;
  std::size_t fresh_ = 0;
};

bool tree_is_ground(const ProofTree& t) {
  return t.literal.term.is_ground() &&
         std::all_of(t.children.begin(), t.children.end(), tree_is_ground);
}

}  // namespace

std::vector<Solution> solve(const Term& goal, const KnowledgeBase& kb, const CaseFacts& facts,
                            const SolveOptions& options) {
  if (goal.is_variable()) throw EngineError(EngineError::Kind::kNonGroundAnswer, "goal is a variable");
  Prover prover(kb, facts, options.depth_limit);
  const auto variables = goal.variables();
  std::vector<Solution> solutions;
  prover.prove({goal, false}, 0, [&](const ProofTree& tree) {
    Solution s;
    for (const auto& v : variables) {
      Term value = prover.resolve(Term::variable(v));
      if (!value.is_ground()) {
        throw EngineError(EngineError::Kind::kNonGroundAnswer,
                          "variable " + v + " left unbound by a derivation of " + goal.to_string());
      }
      s.substitution.bindings.emplace(v, std::move(value));
    }
    s.proof = prover.resolve(tree);
    if (!tree_is_ground(s.proof)) {
      throw EngineError(EngineError::Kind::kNonGroundAnswer,
                        "non-ground proof for " + s.proof.literal.to_string());
    }
    if (std::find(solutions.begin(), solutions.end(), s) == solutions.end()) solutions.push_back(std::move(s));
    return true;
  });
  return solutions;
}

bool provable(const Term& goal, const KnowledgeBase& kb, const CaseFacts& facts,
              const SolveOptions& options) {
  Prover prover(kb, facts, options.depth_limit);
  bool found = false;
  prover.prove({goal, false}, 0, [&](const ProofTree&) {
    found = true;
    return false;
  });
  return found;
}

std::string RightsBundle::article() const {
  const Term& root = primary.literal.term;
  return root.arity() == 5 ? root.arg(2).name() : std::string();
}

namespace {

std::vector<ProofTree> distinct_roots(std::vector<Solution> solutions) {
  std::vector<ProofTree> out;
  for (auto& s : solutions) {
    bool seen = std::any_of(out.begin(), out.end(),
                            [&](const ProofTree& t) { return t.literal == s.proof.literal; });
    if (!seen) out.push_back(std::move(s.proof));
  }
  return out;
}

}  // namespace

std::vector<RightsBundle> derive_rights(std::string_view person, std::string_view source,
                                        const KnowledgeBase& kb, const CaseFacts& facts) {
  const LegalSourceId* src = kb.find_source(source);
  if (!src) {
    throw EngineError(EngineError::Kind::kUnknownSource, "unknown source '" + std::string(source) + "'");
  }
  const KnowledgeBase scoped = kb.restricted_to(source);
  const Term who = Term::atom(std::string(person));
  auto var = [](const char* name) { return Term::variable(name); };

  std::vector<RightsBundle> bundles;
  const Term primary_goal =
      Term::compound("has_right", {var("Right"), var("Tag"), var("Article"), who, var("Option")});
  for (auto& primary : distinct_roots(solve(primary_goal, scoped, facts))) {
    RightsBundle bundle;
    bundle.source = *src;
    bundle.option = primary.literal.term.arg(4).name();
    const Term article = primary.literal.term.arg(2);
    bundle.primary = std::move(primary);

    const Term aux_goal =
        Term::compound("auxiliary_right", {var("Aux"), article, who, var("Type"), var("Value")});
    bundle.auxiliaries = distinct_roots(solve(aux_goal, scoped, facts));
    const Term prop_goal =
        Term::compound("right_property", {var("Prop"), article, who, var("Type"), var("Value")});
    bundle.properties = distinct_roots(solve(prop_goal, scoped, facts));
    bundles.push_back(std::move(bundle));
  }
  return bundles;
}

}  // namespace lawtrace
