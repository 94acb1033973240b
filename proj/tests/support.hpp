#ifndef LAWTRACE_TESTS_SUPPORT_HPP
#define LAWTRACE_TESTS_SUPPORT_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lawtrace/knowledge_base.hpp"
#include "lawtrace/term.hpp"
#include "lawtrace/trace.hpp"

namespace lawtrace::testing {

inline const std::filesystem::path kDataDir{LAWTRACE_DATA_DIR};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline KnowledgeBase eu_kb() { return parse_rules(slurp(kDataDir / "kb/directive_2010_64.rules")); }
inline KnowledgeBase pl_kb() { return parse_rules(slurp(kDataDir / "kb/directive_2010_64_pl.rules")); }
inline KnowledgeBase both_kbs() {
  std::vector<KnowledgeBase> parts{eu_kb(), pl_kb()};
  return merge(parts);
}
inline CaseFacts mario() { return parse_facts(slurp(kDataDir / "facts/mario.facts")); }
inline std::string listing1() { return slurp(kDataDir / "traces/listing1.trace"); }
inline std::string listing2() { return slurp(kDataDir / "traces/listing2.trace"); }
inline std::string fixture_output(int n) {
  return slurp(kDataDir / ("outputs/00" + std::to_string(n) + ".txt"));
}

inline Term t(std::string_view text) { return parse_term(text); }

/// Every ground atom of the case-fact predicates over the schema's constants.
inline std::vector<Term> fact_universe() {
  const std::vector<std::string> people{"mario", "anna"};
  const std::vector<std::string> langs{"polish", "italian"};
  std::vector<Term> out;
  for (const auto& p : people) {
    for (const auto& l : langs) {
      out.push_back(Term::compound("proceeding_language", {Term::atom(p), Term::atom(l)}));
      out.push_back(Term::compound("person_understands", {Term::atom(p), Term::atom(l)}));
    }
    for (const char* d : {"charge", "translation_needed", "passport"}) {
      out.push_back(Term::compound("person_document", {Term::atom(p), Term::atom(d)}));
    }
    out.push_back(Term::compound("proceeding_event", {Term::atom(p), Term::atom("prejudice_fairness")}));
  }
  return out;
}

/// A random subset of fact_universe() with at most `max_size` atoms.
inline CaseFacts random_facts(std::mt19937& rng, std::size_t max_size = 12) {
  auto universe = fact_universe();
  std::shuffle(universe.begin(), universe.end(), rng);
  std::uniform_int_distribution<std::size_t> size(0, std::min(max_size, universe.size()));
  universe.resize(size(rng));
  return CaseFacts(std::set<Term>(universe.begin(), universe.end()));
}

/// Random well-formed trace bundles for round-trip tests.
class BundleGenerator {
 public:
  explicit BundleGenerator(std::uint32_t seed) : rng_(seed) {}

  TraceBundle next() {
    TraceBundle b;
    b.source_id = atom();
    b.article = atom();
    b.title = title();
    b.option = atom();
    b.explanation = tree(0);
    const int aux = pick(0, 2), props = pick(0, 2);
    for (int i = 0; i < aux; ++i) b.auxiliaries.push_back(section());
    for (int i = 0; i < props; ++i) b.properties.push_back(section());
    return b;
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  std::string atom() {
    static const std::string head = "abcdefghijklmnopqrstuvwxyz";
    static const std::string tail = "abcdefghijklmnopqrstuvwxyzABCXYZ0123456789_";
    std::string s(1, head[pick(0, 25)]);
    for (int n = pick(0, 10); n > 0; --n) s += tail[pick(0, static_cast<int>(tail.size()) - 1)];
    return s;
  }

  std::string title() {
    std::string s = pick(0, 1) ? "Article " : "Art. ";
    s += std::to_string(pick(1, 999));
    if (pick(0, 1)) s += "." + std::to_string(pick(1, 9)) + " code of criminal procedure";
    return s;
  }

  Term term() {
    std::vector<Term> args;
    for (int n = pick(1, 5); n > 0; --n) args.push_back(Term::atom(atom()));
    return Term::compound(atom(), std::move(args));
  }

  TraceNode tree(int depth) {
    TraceNode n;
    n.term = term();
    const int roll = depth == 0 ? 0 : pick(0, 3);
    if (roll == 1) {
      n.kind = NodeKind::kFact;
    } else if (roll == 2) {
      n.kind = NodeKind::kNaf;
    } else {
      n.kind = NodeKind::kRule;
      if (depth < 4) {
        for (int c = pick(0, 3); c > 0; --c) n.children.push_back(tree(depth + 1));
      }
    }
    return n;
  }

  TraceSection section() {
    TraceSection s{atom(), atom(), atom(), title(), tree(0)};
    return s;
  }

  std::mt19937 rng_;
};

}  // namespace lawtrace::testing

#endif  // LAWTRACE_TESTS_SUPPORT_HPP
