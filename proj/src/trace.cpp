#include "lawtrace/trace.hpp"

#include <algorithm>

#include "lawtrace/errors.hpp"

namespace lawtrace {

namespace {
constexpr std::string_view kFactMarker = " [FACT]";
constexpr std::size_t kIndent = 4;
}  // namespace

std::string TraceNode::term_text() const {
  return kind == NodeKind::kNaf ? "not(" + term.to_string() + ")" : term.to_string();
}

std::string TraceNode::line() const {
  return kind == NodeKind::kFact ? term_text() + std::string(kFactMarker) : term_text();
}

std::string_view to_string(TermRole role) {
  switch (role) {
    case TermRole::kConclusion: return "CONCLUSION";
    case TermRole::kIntermediate: return "INTERMEDIATE";
    case TermRole::kFactLeaf: return "FACT_LEAF";
    case TermRole::kNafLeaf: return "NAF_LEAF";
  }
  return "";
}

namespace {

TraceNode to_trace_node(const ProofTree& tree) {
  TraceNode node;
  node.term = tree.literal.term;
  switch (tree.justification) {
    case Justification::kFact: node.kind = NodeKind::kFact; break;
    case Justification::kNaf: node.kind = NodeKind::kNaf; break;
    case Justification::kRule: node.kind = NodeKind::kRule; break;
  }
  for (const auto& c : tree.children) node.children.push_back(to_trace_node(c));
  return node;
}

std::string title_for(const KnowledgeBase& kb, const std::string& article) {
  auto title = kb.title_of(article);
  if (!title || title->empty()) throw TraceError("no display title for article '" + article + "'", 0);
  return *title;
}

TraceSection to_section(const ProofTree& tree, const KnowledgeBase& kb) {
  const Term& root = tree.literal.term;
  if (root.arity() != 5) throw TraceError("section root must have arity 5: " + root.to_string(), 0);
  TraceSection s;
  s.article = root.arg(0).name();
  s.type = root.arg(3).name();
  s.value = root.arg(4).name();
  s.title = title_for(kb, s.article);
  s.tree = to_trace_node(tree);
  return s;
}

void render_tree(const TraceNode& node, std::size_t depth, std::string& out) {
  out.append(depth * kIndent, ' ');
  out += node.line();
  out.push_back('\n');
  for (const auto& c : node.children) render_tree(c, depth + 1, out);
}

void render_sections(std::string_view heading, const std::vector<TraceSection>& sections, std::string& out) {
  if (sections.empty()) return;
  out += "\n";
  out += heading;
  out += "\n";
  for (const auto& s : sections) {
    out += "\n" + s.article + " - " + s.type + " - " + s.value + "\n\n";
    out += s.title + "\nExplanation:\n\n";
    render_tree(s.tree, 0, out);
  }
}

}  // namespace

TraceBundle to_trace_bundle(const RightsBundle& bundle, const KnowledgeBase& kb) {
  const Term& root = bundle.primary.literal.term;
  if (root.arity() != 5) throw TraceError("primary root must have arity 5: " + root.to_string(), 0);
  TraceBundle out;
  out.source_id = bundle.source.id;
  out.article = bundle.article();
  out.title = title_for(kb, out.article);
  out.option = bundle.option;
  out.explanation = to_trace_node(bundle.primary);
  for (const auto& a : bundle.auxiliaries) out.auxiliaries.push_back(to_section(a, kb));
  for (const auto& p : bundle.properties) out.properties.push_back(to_section(p, kb));
  return out;
}

std::string render_text(const TraceBundle& bundle) {
  std::string out = bundle.source_id + " - " + bundle.article + "\n\n";
  out += bundle.title + "\n";
  out += "Option: " + bundle.option + "\n\n";
  out += "Explanation:\n\n";
  render_tree(bundle.explanation, 0, out);
  render_sections("Auxiliaries:", bundle.auxiliaries, out);
  render_sections("Properties:", bundle.properties, out);
  return out;
}

TraceDocument render_trace(const RightsBundle& bundle, const KnowledgeBase& kb) {
  TraceDocument doc;
  doc.bundle = to_trace_bundle(bundle, kb);
  doc.raw_text = render_text(doc.bundle);
  return doc;
}

namespace {

class TraceReader {
 public:
  explicit TraceReader(std::string_view text) {
    std::size_t start = 0;
    while (start < text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) throw TraceError("missing final newline", lines_.size() + 1);
      lines_.push_back(text.substr(start, end - start));
      start = end + 1;
    }
  }

  bool at_end() const { return next_ >= lines_.size(); }
  std::size_t line_number() const { return next_ + 1; }
  std::string_view peek(std::size_t ahead = 0) const {
    return next_ + ahead < lines_.size() ? lines_[next_ + ahead] : std::string_view();
  }

  [[noreturn]] void fail(const std::string& message) const { throw TraceError(message, line_number()); }

  std::string_view take(const char* what) {
    if (at_end()) fail(std::string("unexpected end of trace, expected ") + what);
    std::string_view line = lines_[next_];
    if (!line.empty() && (line.back() == ' ' || line.back() == '\t')) fail("trailing whitespace");
    ++next_;
    return line;
  }

  void expect_line(std::string_view expected) {
    if (at_end()) fail("unexpected end of trace, expected '" + std::string(expected) + "'");
    if (peek() != expected) {
      fail(expected.empty() ? "expected a blank line"
                            : "expected '" + std::string(expected) + "', found '" + std::string(peek()) + "'");
    }
    ++next_;
  }

  std::string atom(std::string_view text, const char* what) const {
    if (!is_atom_name(text)) fail(std::string("malformed ") + what + " '" + std::string(text) + "'");
    return std::string(text);
  }

  std::vector<std::string> split_header(const char* what, std::size_t parts) {
    std::string_view line = take(what);
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
      std::size_t sep = line.find(" - ", start);
      out.push_back(std::string(line.substr(start, sep == std::string_view::npos ? sep : sep - start)));
      if (sep == std::string_view::npos) break;
      start = sep + 3;
    }
    --next_;
    if (out.size() != parts) fail(std::string("malformed ") + what + " '" + std::string(line) + "'");
    for (auto& p : out) atom(p, what);
    ++next_;
    return out;
  }

  std::string title() {
    std::string_view line = take("a title line");
    if (line.empty() || line.front() == ' ') {
      --next_;
      fail("expected a title line");
    }
    return std::string(line);
  }

  TraceNode tree() {
    struct Open {
      TraceNode* node;
      std::size_t depth;
    };
    TraceNode root;
    std::vector<Open> stack;
    bool have_root = false;
    while (!at_end() && !peek().empty()) {
      std::string_view raw = take("a tree line");
      std::size_t indent = 0;
      while (indent < raw.size() && (raw[indent] == ' ' || raw[indent] == '\t')) {
        if (raw[indent] == '\t') error_at_previous("tab in indentation");
        ++indent;
      }
      if (indent % kIndent != 0) error_at_previous("bad indentation: " + std::to_string(indent) + " spaces");
      const std::size_t depth = indent / kIndent;
      TraceNode node = parse_node(raw.substr(indent));

      if (!have_root) {
        if (depth != 0) error_at_previous("tree must start at depth 0");
        root = std::move(node);
        stack.push_back({&root, 0});
        have_root = true;
        continue;
      }
      if (depth == 0) error_at_previous("second root in one explanation tree");
      while (stack.back().depth >= depth) stack.pop_back();
      if (depth > stack.back().depth + 1) error_at_previous("indentation jumps more than one level");
      TraceNode* parent = stack.back().node;
      if (parent->kind != NodeKind::kRule) error_at_previous("children under a FACT or negation leaf");
      parent->children.push_back(std::move(node));
      stack.push_back({&parent->children.back(), depth});
    }
    if (!have_root) fail("expected an explanation tree");
    return root;
  }

 private:
  [[noreturn]] void error_at_previous(const std::string& message) const { throw TraceError(message, next_); }

  TraceNode parse_node(std::string_view text) const {
    TraceNode node;
    if (text.size() > kFactMarker.size() && text.ends_with(kFactMarker)) {
      node.kind = NodeKind::kFact;
      text.remove_suffix(kFactMarker.size());
    }
    Literal lit;
    try {
      lit = parse_literal(text);
    } catch (const ParseError& e) {
      error_at_previous("malformed term: " + e.detail());
    }
    if (lit.negated) {
      if (node.kind == NodeKind::kFact) error_at_previous("negated literal marked [FACT]");
      node.kind = NodeKind::kNaf;
    }
    node.term = std::move(lit.term);
    if (node.term.is_variable()) error_at_previous("malformed term: bare variable");
    if (node.term_text() != text) error_at_previous("term not in canonical form: " + std::string(text));
    return node;
  }

  std::vector<std::string_view> lines_;
  std::size_t next_ = 0;
};

bool is_section_heading(std::string_view line) { return line == "Auxiliaries:" || line == "Properties:"; }

}  // namespace

TraceDocument parse_trace(std::string_view input) {
  TraceDocument doc;
  doc.raw_text.reserve(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) {
    if (input[i] == '\r' && i + 1 < input.size() && input[i + 1] == '\n') continue;
    doc.raw_text.push_back(input[i]);
  }

  TraceReader r(doc.raw_text);
  TraceBundle& b = doc.bundle;
  auto header = r.split_header("header", 2);
  b.source_id = header[0];
  b.article = header[1];
  r.expect_line("");
  b.title = r.title();
  std::string_view option = r.take("an Option line");
  if (!option.starts_with("Option: ")) r.fail("expected 'Option: <value>'");
  b.option = r.atom(option.substr(8), "option");
  r.expect_line("");
  r.expect_line("Explanation:");
  r.expect_line("");
  b.explanation = r.tree();

  bool seen_aux = false, seen_props = false;
  while (!r.at_end()) {
    r.expect_line("");
    std::string_view heading = r.take("a section heading");
    std::vector<TraceSection>* target = nullptr;
    if (heading == "Auxiliaries:" && !seen_aux && !seen_props) {
      seen_aux = true;
      target = &b.auxiliaries;
    } else if (heading == "Properties:" && !seen_props) {
      seen_props = true;
      target = &b.properties;
    } else {
      throw TraceError("unknown or misplaced section header '" + std::string(heading) + "'", r.line_number() - 1);
    }
    do {
      r.expect_line("");
      TraceSection s;
      auto parts = r.split_header("section header", 3);
      s.article = parts[0];
      s.type = parts[1];
      s.value = parts[2];
      r.expect_line("");
      s.title = r.title();
      r.expect_line("Explanation:");
      r.expect_line("");
      s.tree = r.tree();
      target->push_back(std::move(s));
    } while (!r.at_end() && !is_section_heading(r.peek(1)));
  }
  return doc;
}

namespace {

void collect(const TraceNode& node, std::size_t depth, std::size_t section, std::vector<TraceTerm>& out) {
  TermRole role = TermRole::kIntermediate;
  if (depth == 0) role = TermRole::kConclusion;
  else if (node.kind == NodeKind::kFact) role = TermRole::kFactLeaf;
  else if (node.kind == NodeKind::kNaf) role = TermRole::kNafLeaf;
  out.push_back({node.term_text(), role, depth, section});
  for (const auto& c : node.children) collect(c, depth + 1, section, out);
}

}  // namespace

std::vector<TraceTerm> extract_terms(const TraceDocument& doc) {
  std::vector<TraceTerm> out;
  const TraceBundle& b = doc.bundle;
  std::size_t section = 0;
  collect(b.explanation, 0, section++, out);
  for (const auto& s : b.auxiliaries) collect(s.tree, 0, section++, out);
  for (const auto& s : b.properties) collect(s.tree, 0, section++, out);
  return out;
}

}  // namespace lawtrace
