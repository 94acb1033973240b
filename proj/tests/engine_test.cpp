#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "lawtrace/engine.hpp"
#include "lawtrace/errors.hpp"
#include "support.hpp"

using namespace lawtrace;
using namespace lawtrace::testing;

namespace {

const ProofTree* find_node(const ProofTree& tree, const std::string& text) {
  if (tree.literal.to_string() == text) return &tree;
  for (const auto& c : tree.children) {
    if (const auto* hit = find_node(c, text)) return hit;
  }
  return nullptr;
}

// Ground goals for the oracle comparison. Each argument position ranges over
// the constants that can reach it: constants written there, plus whatever
// flows in through a shared variable, plus everything for head-only
// variables. Goals stay inside the active domain, which is the universe the
// oracle grounds over.
std::vector<Term> candidate_goals(const KnowledgeBase& kb, const CaseFacts& facts) {
  using Slot = std::pair<PredicateKey, std::size_t>;
  std::set<std::string> all = kb.constants();
  for (const auto& c : facts.constants()) all.insert(c);
  std::map<Slot, std::set<std::string>> dom;
  auto note = [&](const Term& atom) {
    const PredicateKey key = predicate_of(atom);
    for (std::size_t i = 0; i < atom.arity(); ++i) {
      auto& d = dom[{key, i}];
      if (!atom.arg(i).is_variable()) d.insert(atom.arg(i).name());
    }
    if (atom.arity() == 0) dom[{key, 0}];
  };
  for (const auto& f : facts.terms()) note(f);
  for (const auto& c : kb.clauses()) {
    note(c.head);
    for (const auto& l : c.body) note(l.term);
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& c : kb.clauses()) {
      const PredicateKey key = predicate_of(c.head);
      for (std::size_t i = 0; i < c.head.arity(); ++i) {
        const Term& a = c.head.arg(i);
        if (!a.is_variable()) continue;
        std::set<std::string> flow;
        bool bound = false;
        for (const auto& l : c.body) {
          if (l.negated) continue;
          for (std::size_t j = 0; j < l.term.arity(); ++j) {
            if (l.term.arg(j) == a) {
              bound = true;
              const auto& d = dom[{predicate_of(l.term), j}];
              flow.insert(d.begin(), d.end());
            }
          }
        }
        auto& target = dom[{key, i}];
        const std::size_t before = target.size();
        const auto& source = bound ? flow : all;
        target.insert(source.begin(), source.end());
        changed |= target.size() != before;
      }
    }
  }
  std::set<PredicateKey> preds;
  for (const auto& [slot, _] : dom) preds.insert(slot.first);
  std::vector<Term> out;
  for (const auto& p : preds) {
    if (p.arity == 0) {
      out.push_back(Term::atom(p.name));
      continue;
    }
    std::vector<Term> args(p.arity, Term::atom("x"));
    std::function<void(std::size_t)> fill = [&](std::size_t i) {
      if (i == p.arity) {
        out.push_back(Term::compound(p.name, args));
        return;
      }
      for (const auto& c : dom[{p, i}]) {
        args[i] = Term::atom(c);
        fill(i + 1);
      }
    };
    fill(0);
  }
  return out;
}

// Checks a proof bottom-up against the program, the facts and the model.
void replay(const ProofTree& tree, const KnowledgeBase& kb, const CaseFacts& facts, const std::set<Term>& model) {
  ASSERT_TRUE(tree.literal.term.is_ground()) << tree.literal.to_string();
  switch (tree.justification) {
    case Justification::kFact:
      EXPECT_TRUE(facts.contains(tree.literal.term)) << tree.literal.to_string();
      EXPECT_TRUE(tree.children.empty());
      return;
    case Justification::kNaf:
      EXPECT_TRUE(tree.literal.negated);
      EXPECT_FALSE(model.contains(tree.literal.term)) << tree.literal.to_string();
      EXPECT_TRUE(tree.children.empty());
      return;
    case Justification::kRule: {
      ASSERT_LT(tree.clause_index, kb.clauses().size());
      const Clause& c = kb.clauses()[tree.clause_index];
      ASSERT_EQ(c.body.size(), tree.children.size());
      // The node must be an instance of the clause: unify head and body
      // literal by literal with one shared substitution.
      std::map<std::string, Term> sub;
      std::function<bool(const Term&, const Term&)> match = [&](const Term& pat, const Term& g) {
        if (pat.is_variable()) {
          auto [it, fresh] = sub.emplace(pat.name(), g);
          return fresh || it->second == g;
        }
        if (pat.name() != g.name() || pat.arity() != g.arity()) return false;
        for (std::size_t i = 0; i < pat.arity(); ++i) {
          if (!match(pat.arg(i), g.arg(i))) return false;
        }
        return true;
      };
      EXPECT_TRUE(match(c.head, tree.literal.term)) << tree.literal.to_string();
      EXPECT_EQ(tree.article_id, c.article_id);
      for (std::size_t i = 0; i < c.body.size(); ++i) {
        EXPECT_EQ(c.body[i].negated, tree.children[i].literal.negated);
        EXPECT_TRUE(match(c.body[i].term, tree.children[i].literal.term)) << tree.children[i].literal.to_string();
        replay(tree.children[i], kb, facts, model);
      }
      EXPECT_TRUE(model.contains(tree.literal.term)) << tree.literal.to_string() << "\n" << serialize_facts(facts);
      return;
    }
  }
}

}  // namespace

TEST(Solve, EuTranslationRight) {
  auto kb = eu_kb();
  auto sols = solve(t("has_right(A, mario, right_to_translation, O)"), kb, mario());
  ASSERT_EQ(sols.size(), 1u);
  EXPECT_EQ(sols[0].substitution.bindings.at("A"), Term::atom("art3_1"));
  EXPECT_EQ(sols[0].substitution.bindings.at("O"), Term::atom("essentialDocument"));
  const ProofTree& p = sols[0].proof;
  const auto* lang = find_node(p, "proceeding_language(mario, polish)");
  ASSERT_NE(lang, nullptr);
  EXPECT_EQ(lang->justification, Justification::kFact);
  const auto* ess = find_node(p, "essential_document(art3_2, mario, documents)");
  ASSERT_NE(ess, nullptr);
  EXPECT_EQ(ess->justification, Justification::kRule);
  ASSERT_EQ(ess->children.size(), 1u);
  EXPECT_EQ(ess->children[0].literal.to_string(), "person_document(mario, charge)");
  EXPECT_EQ(ess->children[0].justification, Justification::kFact);
  const auto* naf = find_node(p, "not(person_understands(mario, polish))");
  ASSERT_NE(naf, nullptr);
  EXPECT_EQ(naf->justification, Justification::kNaf);
}

TEST(Solve, UnderstandingBlocksRight) {
  auto facts = mario().with(t("person_understands(mario, polish)"));
  EXPECT_TRUE(solve(t("has_right(A, mario, right_to_translation, O)"), eu_kb(), facts).empty());
  EXPECT_TRUE(solve(t("has_right(A, mario, right_to_translation, O)"), pl_kb(), facts).empty());
}

TEST(Solve, PolishTranslationRight) {
  auto sols = solve(t("has_right(A, mario, right_to_translation, O)"), pl_kb(), mario());
  ASSERT_EQ(sols.size(), 1u);
  EXPECT_EQ(sols[0].substitution.bindings.at("A"), Term::atom("article204_2"));
  EXPECT_EQ(sols[0].substitution.bindings.at("O"), Term::atom("documents"));
  const auto* needed = find_node(sols[0].proof, "person_document(mario, translation_needed)");
  ASSERT_NE(needed, nullptr);
  EXPECT_EQ(needed->justification, Justification::kRule);
  ASSERT_EQ(needed->children.size(), 1u);
  EXPECT_EQ(needed->children[0].literal.to_string(), "person_document(mario, charge)");
}

TEST(Solve, NegationOnUnboundVariableIsAnError) {
  auto kb = parse_rules("p(X) :- not(q(X)).\nq(a).\n");
  EXPECT_FALSE(provable(t("p(a)"), kb, {}));
  EXPECT_TRUE(provable(t("p(b)"), kb, {}));
  try {
    solve(t("p(Y)"), kb, {});
    FAIL();
  } catch (const EngineError& e) {
    EXPECT_EQ(e.kind(), EngineError::Kind::kNafNonGround);
    EXPECT_NE(std::string(e.what()).find("q("), std::string::npos);
  }
}

TEST(Solve, DepthLimit) {
  auto kb = parse_rules("p(X) :- p(X).\n");
  try {
    solve(t("p(a)"), kb, {}, SolveOptions{16});
    FAIL();
  } catch (const EngineError& e) {
    EXPECT_EQ(e.kind(), EngineError::Kind::kDepthLimit);
  }
}

TEST(Solve, SubstitutionIsIdempotentAndQueryScoped) {
  auto sols = solve(t("has_right(R, T, A, mario, O)"), both_kbs(), mario());
  ASSERT_EQ(sols.size(), 2u);
  for (const auto& s : sols) {
    const Term q = t("has_right(R, T, A, mario, O)");
    EXPECT_EQ(s.substitution.apply(s.substitution.apply(q)), s.substitution.apply(q));
    for (const auto& [v, _] : s.substitution.bindings) {
      EXPECT_TRUE(v == "R" || v == "T" || v == "A" || v == "O") << v;
    }
  }
}

TEST(DeriveRights, EuBundle) {
  auto kb = both_kbs();
  auto bundles = derive_rights("mario", "directive_2010_64", kb, mario());
  ASSERT_EQ(bundles.size(), 1u);
  const auto& b = bundles[0];
  EXPECT_EQ(b.article(), "art3_1");
  EXPECT_EQ(b.option, "essentialDocument");
  ASSERT_EQ(b.auxiliaries.size(), 1u);
  EXPECT_EQ(b.auxiliaries[0].literal.to_string(), "auxiliary_right(art4, art3_1, mario, cost, state)");
  ASSERT_EQ(b.properties.size(), 1u);
  EXPECT_EQ(b.properties[0].literal.to_string(), "right_property(art3_7, art3_1, mario, form, oral)");
  EXPECT_NE(find_node(b.properties[0], "not(proceeding_event(mario, prejudice_fairness))"), nullptr);
}

TEST(DeriveRights, PolishBundle) {
  auto bundles = derive_rights("mario", "directive_2010_64_pl", both_kbs(), mario());
  ASSERT_EQ(bundles.size(), 1u);
  EXPECT_EQ(bundles[0].article(), "article204_2");
  EXPECT_EQ(bundles[0].option, "documents");
  ASSERT_EQ(bundles[0].auxiliaries.size(), 1u);
  EXPECT_EQ(bundles[0].auxiliaries[0].literal.to_string(),
            "auxiliary_right(article618_7, article204_2, mario, cost, state)");
  EXPECT_TRUE(bundles[0].properties.empty());
}

TEST(DeriveRights, PrejudiceRemovesOralProperty) {
  auto facts = mario().with(t("proceeding_event(mario, prejudice_fairness)"));
  auto bundles = derive_rights("mario", "directive_2010_64", both_kbs(), facts);
  ASSERT_EQ(bundles.size(), 1u);
  EXPECT_TRUE(bundles[0].properties.empty());
  EXPECT_EQ(bundles[0].auxiliaries.size(), 1u);
  auto pl = derive_rights("mario", "directive_2010_64_pl", both_kbs(), facts);
  EXPECT_EQ(pl, derive_rights("mario", "directive_2010_64_pl", both_kbs(), mario()));
}

TEST(DeriveRights, AttachmentInvariant) {
  for (const auto& src : {"directive_2010_64", "directive_2010_64_pl"}) {
    for (const auto& b : derive_rights("mario", src, both_kbs(), mario())) {
      for (const auto* group : {&b.auxiliaries, &b.properties}) {
        for (const auto& tree : *group) {
          EXPECT_EQ(tree.literal.term.arity(), 5u);
          EXPECT_EQ(tree.literal.term.arg(1).name(), b.article());
        }
      }
    }
  }
}

TEST(DeriveRights, UnknownSource) {
  try {
    derive_rights("mario", "directive_1999_1", both_kbs(), mario());
    FAIL();
  } catch (const EngineError& e) {
    EXPECT_EQ(e.kind(), EngineError::Kind::kUnknownSource);
  }
}

TEST(DeriveRights, NoChargeNoRight) {
  auto facts = parse_facts("proceeding_language(mario, polish).\n");
  EXPECT_TRUE(derive_rights("mario", "directive_2010_64", both_kbs(), facts).empty());
  EXPECT_TRUE(derive_rights("mario", "directive_2010_64_pl", both_kbs(), facts).empty());
  EXPECT_FALSE(ground_oracle(both_kbs(), facts).contains(
      t("has_right(art3_1, mario, right_to_translation, essentialDocument)")));
}

TEST(Oracle, Examples) {
  auto model = ground_oracle(eu_kb(), mario());
  EXPECT_TRUE(model.contains(t("has_right(art3_1, mario, right_to_translation, essentialDocument)")));
  EXPECT_TRUE(ground_oracle(KnowledgeBase{}, CaseFacts{}).empty());
  EXPECT_EQ(ground_oracle(KnowledgeBase{}, mario()), mario().terms());
}

// Property: solve and the bottom-up model agree on every ground atom.
TEST(Oracle, AgreesWithSolveOnRandomFacts) {
  std::mt19937 rng(20240601);
  for (const auto& kb : {eu_kb(), pl_kb()}) {
    for (int round = 0; round < 200; ++round) {
      const CaseFacts facts = random_facts(rng);
      const auto model = ground_oracle(kb, facts);
      for (const auto& goal : candidate_goals(kb, facts)) {
        ASSERT_EQ(provable(goal, kb, facts), model.contains(goal))
            << goal.to_string() << " facts:\n" << serialize_facts(facts);
      }
    }
  }
}

TEST(Oracle, ProofsReplay) {
  std::mt19937 rng(99);
  const auto kb = both_kbs();
  for (int round = 0; round < 100; ++round) {
    const CaseFacts facts = random_facts(rng);
    const auto model = ground_oracle(kb, facts);
    for (const auto& sol : solve(t("has_right(R, T, A, P, O)"), kb, facts)) replay(sol.proof, kb, facts, model);
    // Head-only variables range over the active domain, so only people the
    // case mentions are comparable with the model.
    for (const char* person : {"mario", "anna"}) {
      if (!facts.constants().contains(person)) continue;
      const Term goal = Term::compound("right_property", {Term::variable("X"), Term::variable("A"), Term::atom(person),
                                                          Term::variable("Ty"), Term::variable("V")});
      for (const auto& sol : solve(goal, kb, facts)) replay(sol.proof, kb, facts, model);
    }
  }
}

TEST(Solve, Deterministic) {
  std::mt19937 rng(5);
  const auto kb = both_kbs();
  for (int round = 0; round < 50; ++round) {
    const CaseFacts facts = random_facts(rng);
    EXPECT_EQ(solve(t("has_right(R, T, A, P, O)"), kb, facts), solve(t("has_right(R, T, A, P, O)"), kb, facts));
  }
}

// Property: a conclusion proved without negation survives any added fact.
TEST(Solve, MonotoneWithoutNegation) {
  std::mt19937 rng(11);
  const auto kb = both_kbs();
  const auto universe = fact_universe();
  for (int round = 0; round < 100; ++round) {
    const CaseFacts facts = random_facts(rng, 8);
    for (const char* q : {"has_right(R, T, A, P, O)", "auxiliary_right(X, A, mario, Ty, V)", "person_document(P, D)"}) {
      for (const auto& sol : solve(t(q), kb, facts)) {
        if (sol.proof.contains_naf()) continue;
        const Term& goal = sol.proof.literal.term;
        for (const auto& extra : universe) EXPECT_TRUE(provable(goal, kb, facts.with(extra))) << goal.to_string();
      }
    }
  }
}
