#ifndef LAWTRACE_TRACE_HPP
#define LAWTRACE_TRACE_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "lawtrace/engine.hpp"
#include "lawtrace/knowledge_base.hpp"
#include "lawtrace/term.hpp"

namespace lawtrace {

enum class NodeKind { kRule, kFact, kNaf };

/// One line of an explanation tree. For kNaf nodes `term` is the goal that
/// failed, printed as `not(<term>)`.
struct TraceNode {
  Term term;
  NodeKind kind = NodeKind::kRule;
  std::vector<TraceNode> children;

  /// The line text without indentation, e.g. `person_document(mario, charge) [FACT]`.
  std::string line() const;
  /// Canonical term string: line() without the `[FACT]` marker.
  std::string term_text() const;
  friend bool operator==(const TraceNode&, const TraceNode&) = default;
};

/// An auxiliary right or a property, headed `<article> - <type> - <value>`.
struct TraceSection {
  std::string article;
  std::string type;
  std::string value;
  std::string title;
  TraceNode tree;
  friend bool operator==(const TraceSection&, const TraceSection&) = default;
};

struct TraceBundle {
  std::string source_id;
  std::string article;
  std::string title;
  std::string option;
  TraceNode explanation;
  std::vector<TraceSection> auxiliaries;
  std::vector<TraceSection> properties;
  friend bool operator==(const TraceBundle&, const TraceBundle&) = default;
};

struct TraceDocument {
  std::string raw_text;
  TraceBundle bundle;
};

enum class TermRole { kConclusion, kIntermediate, kFactLeaf, kNafLeaf };

std::string_view to_string(TermRole role);

struct TraceTerm {
  std::string text;
  TermRole role = TermRole::kIntermediate;
  std::size_t depth = 0;
  /// 0 for the main explanation, then auxiliaries, then properties.
  std::size_t section = 0;
  friend bool operator==(const TraceTerm&, const TraceTerm&) = default;
};

/// Converts engine output to the trace structure; titles come from kb.
/// Throws TraceError when an article has no display title.
TraceBundle to_trace_bundle(const RightsBundle& bundle, const KnowledgeBase& kb);

/// Text layout: header, title, option, explanation tree (4 spaces per level),
/// then optional `Auxiliaries:` and `Properties:` sections. Lines end in `\n`.
std::string render_text(const TraceBundle& bundle);

TraceDocument render_trace(const RightsBundle& bundle, const KnowledgeBase& kb);

/// Strict inverse of render_text. `\r\n` is normalised to `\n`; anything
/// render_text would not produce is rejected with a TraceError naming the line.
TraceDocument parse_trace(std::string_view text);

/// Every tree node of every section in document order.
std::vector<TraceTerm> extract_terms(const TraceDocument& doc);

}  // namespace lawtrace

#endif  // LAWTRACE_TRACE_HPP
