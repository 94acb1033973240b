#ifndef LAWTRACE_CHAIN_HPP
#define LAWTRACE_CHAIN_HPP

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lawtrace/llm.hpp"
#include "lawtrace/trace.hpp"

namespace lawtrace {

struct ChainStep {
  std::string name;  // "explain_1", "explain_2" or "compare"
  std::string prompt;
  std::string output;
  std::chrono::milliseconds latency{0};

  friend bool operator==(const ChainStep&, const ChainStep&) = default;
};

struct StepFailure {
  std::string step;
  std::string kind;  // LlmError kind, or "error"
  std::string message;
};

/// One pass of the two-step chain: explain each trace, then compare the two
/// explanations. Steps run strictly in that order.
struct ChainRun {
  std::size_t run_index = 0;
  LlmConfig config;
  std::vector<std::string> inputs;  // raw trace texts, in order
  std::vector<ChainStep> steps;
  std::string created_at;           // ISO 8601, UTC
  std::optional<StepFailure> failure;

  bool complete() const { return !failure && steps.size() == 3; }
  /// Outputs of the explanation steps that finished.
  std::vector<std::string> step1_outputs() const;
  /// Empty unless complete().
  std::string step2_output() const;
};

/// Raised by run_chain; carries the steps that finished before the failure.
class ChainError : public Error {
 public:
  ChainError(ChainRun partial, const std::string& step, const std::string& message);
  const ChainRun& partial() const { return partial_; }
  const std::string& step() const { return partial_.failure->step; }

 private:
  ChainRun partial_;
};

ChainRun run_chain(const TraceDocument& first, const TraceDocument& second, CompletionClient& client,
                   const LlmConfig& config, std::size_t run_index = 0);

/// `count` independent chain runs, returned in run-index order. A failed run
/// keeps its partial steps and a failure record; the others still run.
/// Up to `parallelism` runs execute at once.
std::vector<ChainRun> run_repeated(const TraceDocument& first, const TraceDocument& second,
                                   CompletionClient& client, const LlmConfig& config, std::size_t count,
                                   std::size_t parallelism = 1);

}  // namespace lawtrace

#endif  // LAWTRACE_CHAIN_HPP
