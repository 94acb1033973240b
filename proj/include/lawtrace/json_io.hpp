#ifndef LAWTRACE_JSON_IO_HPP
#define LAWTRACE_JSON_IO_HPP

// nlohmann::json adapters for the persisted artifacts.
//
// ChainRun:  {run_index, config, inputs, steps: [{name, prompt, output, latency}],
//             created_at, error?}; latency in milliseconds.
// Report:    {run_index, input_digest, form: {pass, sections, violations},
//             completeness: {coverage, required, cited, missing},
//             groundedness: {hallucinated}, manual: {juridical_pass, notes}}

#include <json.hpp>

#include "lawtrace/chain.hpp"
#include "lawtrace/evaluation.hpp"
#include "lawtrace/llm.hpp"

namespace lawtrace {

void to_json(nlohmann::json& j, const LlmConfig& c);
void from_json(const nlohmann::json& j, LlmConfig& c);

void to_json(nlohmann::json& j, const ChainRun& run);
void from_json(const nlohmann::json& j, ChainRun& run);

void to_json(nlohmann::json& j, const EvaluationReport& r);
void from_json(const nlohmann::json& j, EvaluationReport& r);

void to_json(nlohmann::json& j, const StabilityResult& s);
void to_json(nlohmann::json& j, const StabilitySummary& s);

}  // namespace lawtrace

#endif  // LAWTRACE_JSON_IO_HPP
