#include "lawtrace/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <regex>
#include <set>

#include "lawtrace/errors.hpp"
#include "lawtrace/prompts.hpp"
#include "text_cursor.hpp"

namespace lawtrace {

const std::vector<std::string>& translation_sections() {
  static const std::vector<std::string> s{"Summary", "What Rights do You Have", "Why do You Have Them"};
  return s;
}

const std::vector<std::string>& comparison_sections() {
  static const std::vector<std::string> s{"1. Comparison of differences", "2. Potential consequences"};
  return s;
}

namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

// Lowercased heading text with markers stripped.
std::string normalize_heading(std::string_view line) {
  static const std::regex marker(R"(^(?:[#*_>\s]*)(?:(?:\d+|[A-Za-z])[.)]\s+|[-*+]\s+)?(?:[*_]+)?)");
  std::string s(line);
  std::smatch m;
  if (std::regex_search(s, m, marker)) s.erase(0, m.length(0));
  while (!s.empty() && (s.back() == ':' || s.back() == '*' || s.back() == ' ' || s.back() == '\r')) s.pop_back();
  return lowercase(s);
}

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

void add_subterms(const Term& t, std::set<std::string>& out) {
  if (t.is_variable()) return;
  out.insert(t.to_string());
  for (const auto& a : t.args()) add_subterms(a, out);
}

// Scans free text; calls on_term for each outermost term-shaped substring.
template <typename F>
void scan_terms(std::string_view text, F&& on_term) {
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (!(c >= 'a' && c <= 'z') || (i > 0 && is_identifier_char(text[i - 1]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_identifier_char(text[j])) ++j;
    if (j < text.size() && text[j] == '(') {
      detail::TextCursor cursor(text.substr(i), false);
      try {
        Term t = cursor.read_term();
        on_term(t);
        i += cursor.pos();
        continue;
      } catch (const ParseError&) {
        // not a term; keep scanning after the identifier
      }
    }
    i = j;
  }
}

std::set<std::string> cited_forms(std::string_view output) {
  std::set<std::string> out;
  scan_terms(output, [&](const Term& t) { add_subterms(t, out); });
  return out;
}

bool mentions_atom(std::string_view output, const std::string& atom) {
  for (std::size_t pos = output.find(atom); pos != std::string_view::npos; pos = output.find(atom, pos + 1)) {
    const bool left = pos == 0 || !is_identifier_char(output[pos - 1]);
    const std::size_t end = pos + atom.size();
    const bool right = end >= output.size() || !is_identifier_char(output[end]);
    if (left && right) return true;
  }
  return false;
}

std::string functor_of(const std::string& term_text) { return term_text.substr(0, term_text.find('(')); }

std::string digest(std::string_view kind, std::span<const std::string> sections,
                   std::span<const TraceDocument* const> traces) {
  std::string material(kind);
  for (const auto& s : sections) material += "\n" + s;
  for (const auto* t : traces) material += "\n\x1f" + t->raw_text;
  return sha256_hex(material);
}

}  // namespace

FormResult check_form(std::string_view output, std::span<const std::string> expected_sections) {
  if (expected_sections.empty()) throw Error("check_form needs at least one expected section");
  std::vector<std::string> wanted;
  for (const auto& s : expected_sections) wanted.push_back(normalize_heading(s));

  FormResult result;
  std::vector<std::size_t> order;
  std::size_t start = 0;
  while (start <= output.size()) {
    std::size_t end = output.find('\n', start);
    if (end == std::string_view::npos) end = output.size();
    const std::string line = normalize_heading(output.substr(start, end - start));
    std::size_t best = wanted.size();
    for (std::size_t k = 0; k < wanted.size(); ++k) {
      const auto& w = wanted[k];
      if (w.empty() || !line.starts_with(w)) continue;
      if (line.size() > w.size() && is_alnum(line[w.size()])) continue;
      if (best == wanted.size() || w.size() > wanted[best].size()) best = k;
    }
    if (best != wanted.size()) {
      result.sections_found.push_back(expected_sections[best]);
      order.push_back(best);
    }
    start = end + 1;
  }

  std::vector<std::size_t> seen(wanted.size(), 0);
  for (std::size_t k : order) ++seen[k];
  for (std::size_t k = 0; k < wanted.size(); ++k) {
    if (seen[k] == 0) result.violations.push_back("missing section '" + expected_sections[k] + "'");
    if (seen[k] > 1) result.violations.push_back("duplicate section '" + expected_sections[k] + "'");
  }
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (order[i] < order[i - 1]) {
      result.violations.push_back("section '" + expected_sections[order[i]] + "' out of order");
    }
  }
  result.pass = result.violations.empty();
  return result;
}

std::vector<std::string> find_terms(std::string_view text) {
  std::vector<std::string> out;
  scan_terms(text, [&](const Term& t) { out.push_back(t.to_string()); });
  return out;
}

CompletenessResult check_completeness(std::string_view output, const TraceDocument& trace) {
  const auto terms = extract_terms(trace);
  std::map<std::size_t, std::string> conclusions;
  for (const auto& t : terms) {
    if (t.role == TermRole::kConclusion) conclusions.emplace(t.section, t.text);
  }
  const auto forms = cited_forms(output);
  auto cited_directly = [&](const std::string& text) {
    return text.find('(') == std::string::npos ? mentions_atom(output, text) : forms.contains(text);
  };

  CompletenessResult r;
  std::set<std::string> seen, cited;
  for (const auto& t : terms) {
    bool ok = cited_directly(t.text);
    if (!ok && t.role == TermRole::kIntermediate && t.depth == 1) {
      const auto& conclusion = conclusions.at(t.section);
      ok = functor_of(conclusion) == functor_of(t.text) && cited_directly(conclusion);
    }
    if (ok) cited.insert(t.text);
    if (seen.insert(t.text).second) r.required_terms.push_back(t.text);
  }
  for (const auto& t : r.required_terms) {
    (cited.contains(t) ? r.cited_terms : r.missing_terms).push_back(t);
  }
  r.coverage = r.required_terms.empty()
                   ? 1.0
                   : static_cast<double>(r.cited_terms.size()) / static_cast<double>(r.required_terms.size());
  return r;
}

GroundednessResult check_groundedness(std::string_view output, std::span<const TraceDocument* const> traces) {
  std::set<std::string> known;
  for (const auto* trace : traces) {
    for (const auto& t : extract_terms(*trace)) add_subterms(parse_term(t.text), known);
  }
  GroundednessResult r;
  for (auto& t : find_terms(output)) {
    if (!known.contains(t) &&
        std::find(r.hallucinated_terms.begin(), r.hallucinated_terms.end(), t) == r.hallucinated_terms.end()) {
      r.hallucinated_terms.push_back(std::move(t));
    }
  }
  return r;
}

GroundednessResult check_groundedness(std::string_view output, const TraceDocument& trace) {
  const TraceDocument* traces[] = {&trace};
  return check_groundedness(output, traces);
}

EvaluationReport evaluate(std::string_view output, const TraceDocument& trace,
                          std::span<const std::string> expected_sections, std::size_t run_index) {
  const TraceDocument* traces[] = {&trace};
  EvaluationReport r;
  r.run_index = run_index;
  r.input_digest = digest("explanation", expected_sections, traces);
  r.form = check_form(output, expected_sections);
  r.completeness = check_completeness(output, trace);
  r.groundedness = check_groundedness(output, traces);
  return r;
}

EvaluationReport evaluate_comparison(std::string_view output, const TraceDocument& first,
                                     const TraceDocument& second, std::size_t run_index) {
  const TraceDocument* traces[] = {&first, &second};
  EvaluationReport r;
  r.run_index = run_index;
  r.input_digest = digest("comparison", comparison_sections(), traces);
  r.form = check_form(output, comparison_sections());
  r.completeness.coverage = 1.0;
  r.groundedness = check_groundedness(output, traces);
  return r;
}

StabilityResult stability(std::span<const EvaluationReport> reports) {
  if (reports.size() < 2) throw Error("stability needs at least two reports");
  for (const auto& r : reports) {
    if (r.input_digest != reports.front().input_digest) {
      throw Error("stability needs reports from identical inputs (run " + std::to_string(r.run_index) +
                  " differs)");
    }
  }
  StabilityResult s;
  s.runs = reports.size();
  const double n = static_cast<double>(reports.size());
  std::size_t passes = 0;
  s.coverage_min = 1.0;
  s.coverage_max = 0.0;
  // Deviations from the first value, so identical coverages give an exact
  // mean and a variance of exactly zero.
  const double shift = reports.front().completeness.coverage;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& r : reports) {
    passes += r.form.pass ? 1 : 0;
    s.coverage_min = std::min(s.coverage_min, r.completeness.coverage);
    s.coverage_max = std::max(s.coverage_max, r.completeness.coverage);
    const double d = r.completeness.coverage - shift;
    sum += d;
    sum_sq += d * d;
    if (!r.groundedness.hallucinated_terms.empty()) ++s.runs_with_hallucinations;
  }
  s.form_rate = static_cast<double>(passes) / n;
  s.coverage_mean = shift + sum / n;
  s.coverage_variance = std::max(0.0, (sum_sq - sum * sum / n) / n);
  return s;
}

StabilitySummary summarize(std::span<const RunReports> completed, std::size_t runs_attempted) {
  StabilitySummary s;
  s.runs_attempted = runs_attempted;
  s.runs_completed = completed.size();
  if (completed.empty()) return s;
  std::size_t passes = 0;
  std::vector<EvaluationReport> first, second, comparison;
  for (const auto& r : completed) {
    passes += r.form_pass() ? 1 : 0;
    first.push_back(r.first);
    second.push_back(r.second);
    comparison.push_back(r.comparison);
  }
  s.form_rate = static_cast<double>(passes) / static_cast<double>(completed.size());
  if (completed.size() >= 2) {
    s.first = stability(first);
    s.second = stability(second);
    s.comparison = stability(comparison);
  }
  return s;
}

}  // namespace lawtrace
