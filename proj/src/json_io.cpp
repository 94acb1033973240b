#include "lawtrace/json_io.hpp"

namespace lawtrace {

using nlohmann::json;

void to_json(json& j, const LlmConfig& c) {
  j = {{"model_id", c.model_id},
       {"temperature", c.temperature},
       {"max_tokens", c.max_tokens},
       {"base_url", c.base_url},
       {"timeout_ms", c.timeout.count()}};
}

void from_json(const json& j, LlmConfig& c) {
  LlmConfig d;
  c.model_id = j.value("model_id", d.model_id);
  c.temperature = j.value("temperature", d.temperature);
  c.max_tokens = j.value("max_tokens", d.max_tokens);
  c.base_url = j.value("base_url", d.base_url);
  c.timeout = std::chrono::milliseconds(j.value("timeout_ms", d.timeout.count()));
}

void to_json(json& j, const ChainRun& run) {
  json steps = json::array();
  for (const auto& s : run.steps) {
    steps.push_back({{"name", s.name}, {"prompt", s.prompt}, {"output", s.output}, {"latency", s.latency.count()}});
  }
  j = {{"run_index", run.run_index},
       {"config", run.config},
       {"inputs", run.inputs},
       {"steps", std::move(steps)},
       {"created_at", run.created_at}};
  if (run.failure) {
    j["error"] = {{"step", run.failure->step}, {"kind", run.failure->kind}, {"message", run.failure->message}};
  }
}

void from_json(const json& j, ChainRun& run) {
  run.run_index = j.at("run_index").get<std::size_t>();
  run.config = j.at("config").get<LlmConfig>();
  run.inputs = j.value("inputs", std::vector<std::string>{});
  run.created_at = j.value("created_at", "");
  run.steps.clear();
  for (const auto& s : j.at("steps")) {
    run.steps.push_back({s.at("name").get<std::string>(), s.at("prompt").get<std::string>(),
                         s.at("output").get<std::string>(), std::chrono::milliseconds(s.value("latency", 0))});
  }
  run.failure.reset();
  if (j.contains("error")) {
    const auto& e = j["error"];
    run.failure = StepFailure{e.at("step"), e.value("kind", "error"), e.value("message", "")};
  }
}

void to_json(json& j, const EvaluationReport& r) {
  j = {{"run_index", r.run_index},
       {"input_digest", r.input_digest},
       {"form", {{"pass", r.form.pass}, {"sections", r.form.sections_found}, {"violations", r.form.violations}}},
       {"completeness",
        {{"coverage", r.completeness.coverage},
         {"required", r.completeness.required_terms},
         {"cited", r.completeness.cited_terms},
         {"missing", r.completeness.missing_terms}}},
       {"groundedness", {{"hallucinated", r.groundedness.hallucinated_terms}}},
       {"manual",
        {{"juridical_pass", r.manual.juridical_pass ? json(*r.manual.juridical_pass) : json(nullptr)},
         {"notes", r.manual.notes}}}};
}

void from_json(const json& j, EvaluationReport& r) {
  r.run_index = j.at("run_index").get<std::size_t>();
  r.input_digest = j.value("input_digest", "");
  const auto& form = j.at("form");
  r.form.pass = form.at("pass").get<bool>();
  r.form.sections_found = form.at("sections").get<std::vector<std::string>>();
  r.form.violations = form.at("violations").get<std::vector<std::string>>();
  const auto& comp = j.at("completeness");
  r.completeness.coverage = comp.at("coverage").get<double>();
  r.completeness.required_terms = comp.value("required", std::vector<std::string>{});
  r.completeness.cited_terms = comp.value("cited", std::vector<std::string>{});
  r.completeness.missing_terms = comp.at("missing").get<std::vector<std::string>>();
  r.groundedness.hallucinated_terms = j.at("groundedness").at("hallucinated").get<std::vector<std::string>>();
  r.manual = {};
  if (j.contains("manual")) {
    const auto& m = j["manual"];
    if (m.contains("juridical_pass") && !m["juridical_pass"].is_null()) {
      r.manual.juridical_pass = m["juridical_pass"].get<bool>();
    }
    r.manual.notes = m.value("notes", "");
  }
}

void to_json(json& j, const StabilityResult& s) {
  j = {{"runs", s.runs},
       {"form_rate", s.form_rate},
       {"coverage", {{"min", s.coverage_min}, {"mean", s.coverage_mean}, {"max", s.coverage_max},
                     {"variance", s.coverage_variance}}},
       {"runs_with_hallucinations", s.runs_with_hallucinations}};
}

void to_json(json& j, const StabilitySummary& s) {
  auto optional = [](const std::optional<StabilityResult>& r) { return r ? json(*r) : json(nullptr); };
  j = {{"runs_attempted", s.runs_attempted},
       {"runs_completed", s.runs_completed},
       {"form_rate", s.form_rate},
       {"explanation_1", optional(s.first)},
       {"explanation_2", optional(s.second)},
       {"comparison", optional(s.comparison)}};
}

}  // namespace lawtrace
