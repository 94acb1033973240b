#ifndef LAWTRACE_PROMPTS_HPP
#define LAWTRACE_PROMPTS_HPP

#include <string>
#include <string_view>

#include "lawtrace/trace.hpp"

namespace lawtrace {

enum class PromptId { kTranslation, kComparison };

/// A fixed instruction text. The payload follows it after a blank line, inside
/// a ``` fenced block.
struct PromptTemplate {
  PromptId id;
  std::string_view text;
  /// SHA-256 recorded when the template was transcribed; text must still hash to it.
  std::string_view recorded_sha256;
};

const PromptTemplate& translation_template();
const PromptTemplate& comparison_template();

std::string sha256_hex(std::string_view data);

/// Translation template followed by the trace text.
std::string build_translation_prompt(const TraceDocument& trace);

/// Comparison template followed by both explanations, labelled
/// `=== SOURCE 1 ===` and `=== SOURCE 2 ===` in argument order.
/// Throws Error if either explanation is empty.
std::string build_comparison_prompt(std::string_view first, std::string_view second);

}  // namespace lawtrace

#endif  // LAWTRACE_PROMPTS_HPP
