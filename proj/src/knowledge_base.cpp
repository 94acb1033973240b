#include "lawtrace/knowledge_base.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "lawtrace/errors.hpp"
#include "text_cursor.hpp"

namespace lawtrace {

std::string Clause::to_string() const {
  std::string out = head.to_string();
  for (std::size_t i = 0; i < body.size(); ++i) {
    out += i ? ", " : " :- ";
    out += body[i].to_string();
  }
  out.push_back('.');
  return out;
}

void check_safety(const Clause& clause, std::size_t line) {
  std::vector<std::string> bound = clause.head.variables();
  for (const auto& lit : clause.body) {
    if (!lit.negated) {
      lit.term.collect_variables(bound);
      continue;
    }
    for (const auto& v : lit.term.variables()) {
      if (std::find(bound.begin(), bound.end(), v) == bound.end()) {
        throw SafetyError(v, clause.to_string(), line);
      }
    }
  }
}

namespace {

struct Edge {
  std::size_t to;
  bool negative;
};

// Shortest path from `from` to `to` inside one component, as node indices.
std::vector<std::size_t> path_within(const std::vector<std::vector<Edge>>& graph,
                                     const std::vector<int>& component, std::size_t from,
                                     std::size_t to) {
  std::vector<std::size_t> parent(graph.size(), graph.size());
  std::deque<std::size_t> queue{from};
  parent[from] = from;
  while (!queue.empty()) {
    std::size_t n = queue.front();
    queue.pop_front();
    if (n == to) break;
    for (const auto& e : graph[n]) {
      if (component[e.to] != component[from] || parent[e.to] != graph.size()) continue;
      parent[e.to] = n;
      queue.push_back(e.to);
    }
  }
  std::vector<std::size_t> path;
  for (std::size_t n = to; n != from; n = parent[n]) path.push_back(n);
  path.push_back(from);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

std::vector<std::vector<PredicateKey>> stratify(std::span<const Clause> clauses) {
  std::map<PredicateKey, std::size_t> ids;
  std::vector<PredicateKey> keys;
  auto id_of = [&](const PredicateKey& k) {
    auto [it, inserted] = ids.emplace(k, keys.size());
    if (inserted) keys.push_back(k);
    return it->second;
  };
  std::vector<std::vector<Edge>> graph;
  for (const auto& c : clauses) {
    std::size_t head = id_of(predicate_of(c.head));
    for (const auto& lit : c.body) {
      std::size_t body = id_of(predicate_of(lit.term));
      graph.resize(keys.size());
      graph[head].push_back({body, lit.negated});
    }
  }
  graph.resize(keys.size());

  // Tarjan; components complete callee-first, so numbering them in completion
  // order is already a valid evaluation order.
  const std::size_t n = keys.size();
  std::vector<int> index(n, -1), low(n, 0), component(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  int next_index = 0, components = 0;
  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = next_index++;
    stack.push_back(v);
    on_stack[v] = true;
    for (const auto& e : graph[v]) {
      if (index[e.to] < 0) {
        visit(e.to);
        low[v] = std::min(low[v], low[e.to]);
      } else if (on_stack[e.to]) {
        low[v] = std::min(low[v], index[e.to]);
      }
    }
    if (low[v] == index[v]) {
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        component[w] = components;
      } while (w != v);
      ++components;
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (index[v] < 0) visit(v);
  }

  for (std::size_t v = 0; v < n; ++v) {
    for (const auto& e : graph[v]) {
      if (e.negative && component[e.to] == component[v]) {
        // Close the negative edge v -> e.to with a path back from e.to to v.
        std::vector<std::string> cycle{keys[v].to_string()};
        if (e.to != v) {
          auto back = path_within(graph, component, e.to, v);
          for (std::size_t i = 0; i + 1 < back.size(); ++i) cycle.push_back(keys[back[i]].to_string());
        }
        throw StratificationError(std::move(cycle));
      }
    }
  }

  std::vector<std::vector<std::size_t>> members(components);
  for (std::size_t v = 0; v < n; ++v) members[component[v]].push_back(v);
  std::vector<std::size_t> level(components, 0);
  std::size_t top = 0;
  for (int comp = 0; comp < components; ++comp) {
    for (std::size_t v : members[comp]) {
      for (const auto& e : graph[v]) {
        if (component[e.to] == comp) continue;
        level[comp] = std::max(level[comp], level[component[e.to]] + (e.negative ? 1 : 0));
      }
    }
    top = std::max(top, level[comp]);
  }
  std::vector<std::vector<PredicateKey>> strata(n ? top + 1 : 0);
  for (std::size_t v = 0; v < n; ++v) strata[level[component[v]]].push_back(keys[v]);
  for (auto& s : strata) std::sort(s.begin(), s.end());
  return strata;
}

namespace {

void check_function_free(const Term& t, const char* what) {
  if (t.has_nested_compound()) throw Error(std::string(what) + " is not function-free: " + t.to_string());
}

}  // namespace

KnowledgeBase::KnowledgeBase(std::vector<LegalSourceId> sources, std::vector<Clause> clauses,
                             std::map<std::string, std::string> article_titles)
    : sources_(std::move(sources)), clauses_(std::move(clauses)), article_titles_(std::move(article_titles)) {
  std::sort(sources_.begin(), sources_.end(),
            [](const LegalSourceId& a, const LegalSourceId& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < sources_.size(); ++i) {
    if (!is_atom_name(sources_[i].id)) throw KnowledgeBaseError("invalid source id '" + sources_[i].id + "'");
    if (i && sources_[i].id == sources_[i - 1].id) {
      throw KnowledgeBaseError("duplicate source id '" + sources_[i].id + "'");
    }
  }
  for (const auto& [article, title] : article_titles_) {
    if (!is_atom_name(article)) throw KnowledgeBaseError("invalid article id '" + article + "'");
  }
  for (std::size_t i = 0; i < clauses_.size(); ++i) {
    auto& c = clauses_[i];
    if (c.head.is_variable() || c.head.name() == "not") {
      throw KnowledgeBaseError("invalid clause head: " + c.head.to_string());
    }
    check_function_free(c.head, "clause head");
    for (const auto& lit : c.body) {
      if (lit.term.is_variable()) throw KnowledgeBaseError("variable used as a body literal in " + c.to_string());
      check_function_free(lit.term, "body literal");
    }
    if (!c.source.empty() && !find_source(c.source)) {
      throw KnowledgeBaseError("clause refers to undeclared source '" + c.source + "'");
    }
    if (!c.article_id.empty() && !is_atom_name(c.article_id)) {
      throw KnowledgeBaseError("invalid article id '" + c.article_id + "'");
    }
    c.display_title = title_of(c.article_id).value_or("");
    check_safety(c);
    index_[predicate_of(c.head)].push_back(i);
  }
  strata_ = stratify(clauses_);
}

const LegalSourceId* KnowledgeBase::find_source(std::string_view id) const {
  auto it = std::lower_bound(sources_.begin(), sources_.end(), id,
                             [](const LegalSourceId& s, std::string_view v) { return s.id < v; });
  return it != sources_.end() && it->id == id ? &*it : nullptr;
}

std::optional<std::string> KnowledgeBase::title_of(std::string_view article_id) const {
  auto it = article_titles_.find(std::string(article_id));
  if (it == article_titles_.end()) return std::nullopt;
  return it->second;
}

std::span<const std::size_t> KnowledgeBase::clauses_for(const PredicateKey& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return {};
  return it->second;
}

std::set<std::string> KnowledgeBase::constants() const {
  std::set<std::string> out;
  for (const auto& c : clauses_) {
    c.head.collect_constants(out);
    for (const auto& lit : c.body) lit.term.collect_constants(out);
  }
  return out;
}

KnowledgeBase KnowledgeBase::restricted_to(std::string_view source_id) const {
  std::vector<Clause> kept;
  std::copy_if(clauses_.begin(), clauses_.end(), std::back_inserter(kept),
               [&](const Clause& c) { return c.source == source_id; });
  std::vector<LegalSourceId> sources;
  if (const auto* s = find_source(source_id)) sources.push_back(*s);
  return KnowledgeBase(std::move(sources), std::move(kept), article_titles_);
}

KnowledgeBase merge(std::span<const KnowledgeBase> parts) {
  std::map<std::string, std::string> labels;
  std::map<std::string, std::string> titles;
  std::vector<Clause> clauses;
  for (const auto& kb : parts) {
    for (const auto& s : kb.sources()) {
      auto [it, inserted] = labels.emplace(s.id, s.jurisdiction_label);
      if (inserted || s.jurisdiction_label.empty()) continue;
      if (it->second.empty()) it->second = s.jurisdiction_label;
      else if (it->second != s.jurisdiction_label) {
        throw KnowledgeBaseError("conflicting jurisdiction for source '" + s.id + "'");
      }
    }
    for (const auto& [article, title] : kb.article_titles()) {
      auto [it, inserted] = titles.emplace(article, title);
      if (!inserted && it->second != title) {
        throw KnowledgeBaseError("conflicting titles for article '" + article + "'");
      }
    }
    clauses.insert(clauses.end(), kb.clauses().begin(), kb.clauses().end());
  }
  std::vector<LegalSourceId> sources;
  for (auto& [id, label] : labels) sources.push_back({id, label});
  return KnowledgeBase(std::move(sources), std::move(clauses), std::move(titles));
}

CaseFacts::CaseFacts(std::set<Term> facts) : facts_(std::move(facts)) {
  for (const auto& f : facts_) {
    if (!f.is_ground()) throw Error("non-ground fact: " + f.to_string());
    if (f.is_variable() || f.name() == "not") throw Error("invalid fact: " + f.to_string());
    check_function_free(f, "fact");
  }
}

CaseFacts CaseFacts::with(Term fact) const {
  auto copy = facts_;
  copy.insert(std::move(fact));
  return CaseFacts(std::move(copy));
}

std::set<std::string> CaseFacts::constants() const {
  std::set<std::string> out;
  for (const auto& f : facts_) f.collect_constants(out);
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

Term read_atomic_formula(detail::TextCursor& cursor, const char* what) {
  cursor.skip_layout();
  std::size_t line = cursor.line(), column = cursor.column();
  Term t = cursor.read_term();
  if (t.is_variable()) throw ParseError(std::string("variable in place of ") + what, line, column);
  if (t.has_nested_compound()) {
    throw ParseError(std::string(what) + " must be function-free: " + t.to_string(), line, column);
  }
  return t;
}

Literal read_body_literal(detail::TextCursor& cursor) {
  cursor.skip_layout();
  std::size_t line = cursor.line(), column = cursor.column();
  Term t = cursor.read_term();
  if (t.is_variable()) throw ParseError("variable in place of a body literal", line, column);
  if (t.name() == "not" && t.arity() == 1) {
    const Term& inner = t.arg(0);
    if (inner.is_variable()) throw ParseError("not/1 applied to a variable", line, column);
    if (inner.has_nested_compound()) {
      throw ParseError("body literal must be function-free: " + inner.to_string(), line, column);
    }
    return {inner, true};
  }
  if (t.has_nested_compound()) {
    throw ParseError("body literal must be function-free: " + t.to_string(), line, column);
  }
  return {std::move(t), false};
}

}  // namespace

KnowledgeBase parse_rules(std::string_view text) {
  detail::TextCursor cursor(text);
  std::map<std::string, std::string> labels;
  std::map<std::string, std::string> titles;
  std::vector<Clause> clauses;
  std::string source, article;

  for (;;) {
    cursor.skip_spaces();
    if (cursor.at_end()) break;
    if (cursor.peek() == '%') {
      if (cursor.peek(1) != '%') {
        cursor.rest_of_line();
        continue;
      }
      std::size_t line = cursor.line(), column = cursor.column();
      cursor.advance();
      cursor.advance();
      std::string_view meta = cursor.rest_of_line();
      auto colon = meta.find(':');
      if (colon == std::string_view::npos) throw ParseError("metadata line without ':'", line, column);
      std::string_view key = trim(meta.substr(0, colon));
      std::string value(trim(meta.substr(colon + 1)));
      if (key == "source") {
        if (!is_atom_name(value)) throw ParseError("invalid source id '" + value + "'", line, column);
        source = value;
        article.clear();
        labels.emplace(source, "");
      } else if (key == "jurisdiction") {
        if (source.empty()) throw ParseError("jurisdiction before any source", line, column);
        auto& label = labels[source];
        if (!label.empty() && label != value) {
          throw ParseError("conflicting jurisdiction for source '" + source + "'", line, column);
        }
        label = value;
      } else if (key == "article") {
        if (!value.empty() && !is_atom_name(value)) {
          throw ParseError("invalid article id '" + value + "'", line, column);
        }
        article = value;
      } else if (key == "title") {
        if (article.empty()) throw ParseError("title without a current article", line, column);
        auto [it, inserted] = titles.emplace(article, value);
        if (!inserted && it->second != value) {
          throw ParseError("conflicting title for article '" + article + "'", line, column);
        }
      } else {
        throw ParseError("unknown metadata key '" + std::string(key) + "'", line, column);
      }
      continue;
    }

    std::size_t line = cursor.line();
    Clause clause;
    clause.head = read_atomic_formula(cursor, "clause head");
    if (clause.head.name() == "not") cursor.fail("negated literal used as a clause head");
    cursor.skip_layout();
    if (cursor.peek() == ':') {
      cursor.advance();
      cursor.expect('-');
      for (;;) {
        clause.body.push_back(read_body_literal(cursor));
        cursor.skip_layout();
        if (cursor.peek() == ',') {
          cursor.advance();
          continue;
        }
        break;
      }
    }
    cursor.expect('.');
    clause.source = source;
    clause.article_id = article;
    check_safety(clause, line);
    clauses.push_back(std::move(clause));
  }

  std::vector<LegalSourceId> sources;
  for (auto& [id, label] : labels) sources.push_back({id, label});
  return KnowledgeBase(std::move(sources), std::move(clauses), std::move(titles));
}

CaseFacts parse_facts(std::string_view text) {
  detail::TextCursor cursor(text);
  std::set<Term> facts;
  for (;;) {
    cursor.skip_layout();
    if (cursor.at_end()) break;
    std::size_t line = cursor.line(), column = cursor.column();
    Term t = read_atomic_formula(cursor, "fact");
    if (t.name() == "not") throw ParseError("negated fact", line, column);
    if (!t.is_ground()) throw ParseError("non-ground fact: " + t.to_string(), line, column);
    cursor.skip_layout();
    cursor.expect('.');
    facts.insert(std::move(t));
  }
  return CaseFacts(std::move(facts));
}

std::string serialize_rules(const KnowledgeBase& kb) {
  std::string out;
  std::set<std::string> emitted_sources;
  auto emit_source = [&](const std::string& id) {
    out += "%% source: " + id + "\n";
    if (emitted_sources.insert(id).second) {
      if (const auto* s = kb.find_source(id); s && !s->jurisdiction_label.empty()) {
        out += "%% jurisdiction: " + s->jurisdiction_label + "\n";
      }
    }
  };
  auto emit_article = [&](const std::string& id) {
    out += id.empty() ? "%% article:\n" : "%% article: " + id + "\n";
    if (auto title = kb.title_of(id)) out += "%% title: " + *title + "\n";
  };

  std::set<std::string> used_sources, used_articles;
  for (const auto& c : kb.clauses()) {
    used_sources.insert(c.source);
    used_articles.insert(c.article_id);
  }

  // Parser state starts with no source and no article.
  std::string source, article;
  bool first = true;
  for (const auto& c : kb.clauses()) {
    if (c.source != source || (first && !c.source.empty())) {
      if (c.source.empty()) {
        throw KnowledgeBaseError("cannot serialize a clause without source after a sourced clause");
      }
      emit_source(c.source);
      source = c.source;
      article.clear();
    }
    if (c.article_id != article) {
      emit_article(c.article_id);
      article = c.article_id;
    }
    out += c.to_string();
    out.push_back('\n');
    first = false;
  }
  // Declarations without clauses go last so they cannot leak into clause state.
  for (const auto& s : kb.sources()) {
    if (!used_sources.contains(s.id)) emit_source(s.id);
  }
  for (const auto& [id, title] : kb.article_titles()) {
    if (!used_articles.contains(id)) emit_article(id);
  }
  return out;
}

std::string serialize_facts(const CaseFacts& facts) {
  std::string out;
  for (const auto& f : facts.terms()) out += f.to_string() + ".\n";
  return out;
}

}  // namespace lawtrace
