#include "lawtrace/chain.hpp"

#include <atomic>
#include <ctime>
#include <thread>

#include "lawtrace/prompts.hpp"

namespace lawtrace {

std::vector<std::string> ChainRun::step1_outputs() const {
  std::vector<std::string> out;
  for (const auto& s : steps) {
    if (s.name != "compare") out.push_back(s.output);
  }
  return out;
}

std::string ChainRun::step2_output() const { return complete() ? steps.back().output : std::string(); }

ChainError::ChainError(ChainRun partial, const std::string& step, const std::string& message)
    : Error("chain step " + step + " failed: " + message), partial_(std::move(partial)) {}

namespace {

std::string utc_now() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

ChainRun run_chain(const TraceDocument& first, const TraceDocument& second, CompletionClient& client,
                   const LlmConfig& config, std::size_t run_index) {
  ChainRun run;
  run.run_index = run_index;
  run.config = config;
  run.inputs = {first.raw_text, second.raw_text};
  run.created_at = utc_now();

  auto step = [&](std::string name, const auto& make_prompt) -> const std::string& {
    try {
      std::string prompt = make_prompt();
      LlmResponse r = client.complete(prompt, config);
      run.steps.push_back({std::move(name), std::move(prompt), std::move(r.text), r.latency});
    } catch (const LlmError& e) {
      run.failure = StepFailure{name, std::string(to_string(e.kind())), e.what()};
      throw ChainError(run, name, e.what());
    } catch (const std::exception& e) {
      run.failure = StepFailure{name, "error", e.what()};
      throw ChainError(run, name, e.what());
    }
    return run.steps.back().output;
  };

  const std::string a = step("explain_1", [&] { return build_translation_prompt(first); });
  const std::string b = step("explain_2", [&] { return build_translation_prompt(second); });
  step("compare", [&] { return build_comparison_prompt(a, b); });
  return run;
}

std::vector<ChainRun> run_repeated(const TraceDocument& first, const TraceDocument& second,
                                   CompletionClient& client, const LlmConfig& config, std::size_t count,
                                   std::size_t parallelism) {
  if (count == 0) throw Error("repetition count must be positive");
  std::vector<ChainRun> runs(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        runs[i] = run_chain(first, second, client, config, i);
      } catch (const ChainError& e) {
        runs[i] = e.partial();
      }
    }
  };
  parallelism = std::max<std::size_t>(1, std::min(parallelism, count));
  if (parallelism == 1) {
    worker();
    return runs;
  }
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < parallelism; ++t) pool.emplace_back(worker);
  pool.clear();
  return runs;
}

}  // namespace lawtrace
