#ifndef LAWTRACE_EVALUATION_HPP
#define LAWTRACE_EVALUATION_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lawtrace/trace.hpp"

namespace lawtrace {

/// Summary / What Rights do You Have / Why do You Have Them.
const std::vector<std::string>& translation_sections();
/// 1. Comparison of differences / 2. Potential consequences.
const std::vector<std::string>& comparison_sections();

struct FormResult {
  std::vector<std::string> sections_found;
  bool pass = false;
  std::vector<std::string> violations;
  friend bool operator==(const FormResult&, const FormResult&) = default;
};

struct CompletenessResult {
  std::vector<std::string> required_terms;
  std::vector<std::string> cited_terms;
  std::vector<std::string> missing_terms;
  double coverage = 0.0;
  friend bool operator==(const CompletenessResult&, const CompletenessResult&) = default;
};

struct GroundednessResult {
  std::vector<std::string> hallucinated_terms;
  friend bool operator==(const GroundednessResult&, const GroundednessResult&) = default;
};

/// Juridical validity is judged by a person; the harness only carries the verdict.
struct ManualAnnotation {
  std::optional<bool> juridical_pass;
  std::string notes;
  friend bool operator==(const ManualAnnotation&, const ManualAnnotation&) = default;
};

struct EvaluationReport {
  std::size_t run_index = 0;
  /// Identifies the (trace, expected sections) input; stability() compares it.
  std::string input_digest;
  FormResult form;
  CompletenessResult completeness;
  GroundednessResult groundedness;
  ManualAnnotation manual;
  friend bool operator==(const EvaluationReport&, const EvaluationReport&) = default;
};

/// Section headers are matched case-insensitively at line starts, ignoring
/// enumeration markers (`1.`, `a)`, `-`), markdown emphasis and a trailing colon.
/// Passes iff every expected section appears exactly once and in order.
/// Throws Error if expected_sections is empty.
FormResult check_form(std::string_view output, std::span<const std::string> expected_sections);

/// Term-shaped substrings `name(arg, ...)` of free text, canonically spaced,
/// in order of appearance. Nested terms are reported through their outermost term.
std::vector<std::string> find_terms(std::string_view text);

/// Required terms are all trace nodes; a depth-1 restatement of a section's
/// conclusion (same functor) also counts as cited when the conclusion is.
/// Matching is exact on canonical term strings.
CompletenessResult check_completeness(std::string_view output, const TraceDocument& trace);

/// Every term in the output must occur in the trace, possibly as a subterm.
GroundednessResult check_groundedness(std::string_view output, std::span<const TraceDocument* const> traces);
GroundednessResult check_groundedness(std::string_view output, const TraceDocument& trace);

EvaluationReport evaluate(std::string_view output, const TraceDocument& trace,
                          std::span<const std::string> expected_sections, std::size_t run_index = 0);

/// Comparison output: form against comparison_sections(), groundedness
/// against both traces. The comparison prompt asks for no Prolog terms, so the
/// required-term set is empty and coverage is 1 by convention.
EvaluationReport evaluate_comparison(std::string_view output, const TraceDocument& first,
                                     const TraceDocument& second, std::size_t run_index = 0);

struct StabilityResult {
  std::size_t runs = 0;
  double form_rate = 0.0;
  double coverage_min = 0.0;
  double coverage_mean = 0.0;
  double coverage_max = 0.0;
  double coverage_variance = 0.0;  // population variance
  std::size_t runs_with_hallucinations = 0;
};

/// Needs at least two reports sharing one input_digest; throws Error otherwise.
StabilityResult stability(std::span<const EvaluationReport> reports);

/// Reports of one chain run: both explanations and the comparison.
struct RunReports {
  std::size_t run_index = 0;
  EvaluationReport first;
  EvaluationReport second;
  EvaluationReport comparison;

  bool form_pass() const { return first.form.pass && second.form.pass && comparison.form.pass; }
};

struct StabilitySummary {
  std::size_t runs_attempted = 0;
  std::size_t runs_completed = 0;
  /// Fraction of completed runs whose three outputs all pass the form check.
  double form_rate = 0.0;
  std::optional<StabilityResult> first;
  std::optional<StabilityResult> second;
  std::optional<StabilityResult> comparison;
};

StabilitySummary summarize(std::span<const RunReports> completed, std::size_t runs_attempted);

}  // namespace lawtrace

#endif  // LAWTRACE_EVALUATION_HPP
