#include "lawtrace/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "lawtrace/chain.hpp"
#include "lawtrace/engine.hpp"
#include "lawtrace/evaluation.hpp"
#include "lawtrace/json_io.hpp"
#include "lawtrace/knowledge_base.hpp"
#include "lawtrace/llm.hpp"
#include "lawtrace/prompts.hpp"
#include "lawtrace/trace.hpp"

namespace lawtrace::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunConfig {
  std::vector<std::string> kb_paths;
  std::string facts_path;
  std::vector<std::string> sources;
  std::string person;
  std::vector<std::string> trace_paths;
  LlmConfig llm;
  std::string mock_dir;
  bool mock_cycle = false;
  std::size_t repetitions = 10;
  std::size_t parallel = 1;
  std::string output_dir = ".";
  // evaluate
  std::string output_path;
  std::string trace_path;
  std::string kind = "translation";
};

// Exit with a status after printing a diagnostic.
struct Failure {
  int status;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kInputError, "cannot read " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out || !out.write(content.data(), static_cast<std::streamsize>(content.size()))) {
    throw Failure{kInputError, "cannot write " + path.string()};
  }
}

std::string indexed(const char* stem, std::size_t index, const char* ext) {
  std::ostringstream name;
  name << stem << '_' << std::setw(3) << std::setfill('0') << index << ext;
  return name.str();
}

KnowledgeBase load_kb(const RunConfig& cfg) {
  if (cfg.kb_paths.empty()) throw Failure{kUsage, "--kb is required"};
  std::vector<KnowledgeBase> parts;
  for (const auto& p : cfg.kb_paths) {
    try {
      parts.push_back(parse_rules(read_file(p)));
    } catch (const Error& e) {
      throw Failure{kInputError, p + ": " + e.what()};
    }
  }
  try {
    return merge(parts);
  } catch (const Error& e) {
    throw Failure{kInputError, e.what()};
  }
}

CaseFacts load_facts(const RunConfig& cfg) {
  if (cfg.facts_path.empty()) throw Failure{kUsage, "--facts is required"};
  try {
    return parse_facts(read_file(cfg.facts_path));
  } catch (const Error& e) {
    throw Failure{kInputError, cfg.facts_path + ": " + e.what()};
  }
}

void require_person(const RunConfig& cfg) {
  if (!is_atom_name(cfg.person)) throw Failure{kUsage, "--person must be an atom, got '" + cfg.person + "'"};
}

std::vector<RightsBundle> rights_for(const std::string& source, const KnowledgeBase& kb, const CaseFacts& facts,
                                     const RunConfig& cfg) {
  if (!kb.find_source(source)) throw Failure{kUsage, "unknown source '" + source + "'"};
  try {
    return derive_rights(cfg.person, source, kb, facts);
  } catch (const Error& e) {
    throw Failure{kInputError, e.what()};
  }
}

TraceDocument load_trace(const std::string& path) {
  try {
    return parse_trace(read_file(path));
  } catch (const Error& e) {
    throw Failure{kInputError, path + ": " + e.what()};
  }
}

// Traces named by --trace, or else the first bundle of each --source.
std::vector<TraceDocument> resolve_traces(const RunConfig& cfg) {
  std::vector<TraceDocument> traces;
  if (!cfg.trace_paths.empty()) {
    for (const auto& p : cfg.trace_paths) traces.push_back(load_trace(p));
    return traces;
  }
  if (cfg.sources.empty()) throw Failure{kUsage, "give --trace files or --kb/--facts/--source/--person"};
  require_person(cfg);
  const KnowledgeBase kb = load_kb(cfg);
  const CaseFacts facts = load_facts(cfg);
  for (const auto& source : cfg.sources) {
    auto bundles = rights_for(source, kb, facts, cfg);
    if (bundles.empty()) throw Failure{kNoRights, "no rights derived for " + cfg.person + " under " + source};
    try {
      traces.push_back(render_trace(bundles.front(), kb));
    } catch (const Error& e) {
      throw Failure{kInputError, e.what()};
    }
  }
  return traces;
}

std::unique_ptr<CompletionClient> make_client(const RunConfig& cfg) {
  try {
    cfg.llm.validate();
    if (!cfg.mock_dir.empty()) return mock_from_dir(cfg.mock_dir, cfg.mock_cycle);
    return HttpClient::from_environment();
  } catch (const LlmError& e) {
    throw Failure{kGatewayError, e.what()};
  } catch (const Error& e) {
    throw Failure{kInputError, e.what()};
  }
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  require_person(cfg);
  const KnowledgeBase kb = load_kb(cfg);
  const CaseFacts facts = load_facts(cfg);
  std::vector<std::string> sources = cfg.sources;
  if (sources.empty()) {
    for (const auto& s : kb.sources()) sources.push_back(s.id);
  }
  std::size_t written = 0;
  std::set<std::string> names;
  for (const auto& source : sources) {
    for (const auto& bundle : rights_for(source, kb, facts, cfg)) {
      TraceDocument doc;
      try {
        doc = render_trace(bundle, kb);
      } catch (const Error& e) {
        throw Failure{kInputError, e.what()};
      }
      std::string stem = source + "-" + bundle.article();
      std::string name = stem + ".trace";
      for (int n = 2; names.contains(name); ++n) name = stem + "-" + std::to_string(n) + ".trace";
      names.insert(name);
      const fs::path path = fs::path(cfg.output_dir) / name;
      write_file(path, doc.raw_text);
      out << path.string() << '\n';
      ++written;
    }
  }
  return written ? kOk : kNoRights;
}

int cmd_explain(const RunConfig& cfg, std::ostream& out) {
  auto traces = resolve_traces(cfg);
  if (traces.size() != 1) throw Failure{kUsage, "explain needs exactly one trace"};
  const TraceDocument& trace = traces.front();
  auto client = make_client(cfg);
  LlmResponse response;
  const std::string prompt = build_translation_prompt(trace);
  try {
    response = client->complete(prompt, cfg.llm);
  } catch (const Error& e) {
    throw Failure{kGatewayError, e.what()};
  }
  const EvaluationReport report = evaluate(response.text, trace, translation_sections());
  const fs::path dir(cfg.output_dir);
  write_file(dir / "prompt.txt", prompt);
  write_file(dir / "explanation.txt", response.text);
  const std::string report_text = json(report).dump(2) + "\n";
  write_file(dir / "report.json", report_text);
  out << report_text;
  return kOk;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::size_t named = cfg.trace_paths.empty() ? cfg.sources.size() : cfg.trace_paths.size();
  if (named != 2) throw Failure{kUsage, "compare needs exactly two sources or two traces"};
  if (cfg.repetitions == 0) throw Failure{kUsage, "--repetitions must be positive"};
  auto traces = resolve_traces(cfg);
  auto client = make_client(cfg);
  const auto runs = run_repeated(traces[0], traces[1], *client, cfg.llm, cfg.repetitions, cfg.parallel);

  const fs::path dir(cfg.output_dir);
  std::vector<RunReports> completed;
  for (const auto& run : runs) {
    write_file(dir / indexed("run", run.run_index, ".json"), json(run).dump(2) + "\n");
    if (!run.complete()) {
      err << "run " << run.run_index << " failed at " << run.failure->step << ": " << run.failure->message << '\n';
      continue;
    }
    RunReports r;
    r.run_index = run.run_index;
    r.first = evaluate(run.steps[0].output, traces[0], translation_sections(), run.run_index);
    r.second = evaluate(run.steps[1].output, traces[1], translation_sections(), run.run_index);
    r.comparison = evaluate_comparison(run.steps[2].output, traces[0], traces[1], run.run_index);
    json reports = {{"run_index", r.run_index},
                    {"explanation_1", r.first},
                    {"explanation_2", r.second},
                    {"comparison", r.comparison}};
    write_file(dir / indexed("report", run.run_index, ".json"), reports.dump(2) + "\n");
    completed.push_back(std::move(r));
  }
  const std::string summary = json(summarize(completed, runs.size())).dump(2) + "\n";
  write_file(dir / "stability.json", summary);
  out << summary;
  return completed.empty() ? kGatewayError : kOk;
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& out) {
  const std::string output = read_file(cfg.output_path);
  const TraceDocument trace = load_trace(cfg.trace_path);
  EvaluationReport report;
  if (cfg.kind == "translation") {
    report = evaluate(output, trace, translation_sections());
  } else if (cfg.kind == "comparison") {
    report = evaluate_comparison(output, trace, trace);
  } else {
    throw Failure{kUsage, "--kind must be translation or comparison"};
  }
  const std::string text = json(report).dump(2) + "\n";
  if (!cfg.output_dir.empty() && cfg.output_dir != ".") write_file(fs::path(cfg.output_dir) / "report.json", text);
  out << text;
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Rule-based legal reasoning with LLM explanations"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with option defaults; flags win");

  app.add_option("--kb", cfg.kb_paths, "Rule file (repeatable)");
  app.add_option("--facts", cfg.facts_path, "Case facts file");
  app.add_option("--source", cfg.sources, "Legal source id (repeatable)");
  app.add_option("--person", cfg.person, "Person atom, e.g. mario");
  app.add_option("--trace", cfg.trace_paths, "Trace file instead of solving (repeatable)");
  auto* mock = app.add_option("--mock-dir", cfg.mock_dir, "Replay responses from NNN.txt files");
  app.add_flag("--mock-cycle", cfg.mock_cycle, "Restart the mock queue when exhausted");
  auto* base_url = app.add_option("--base-url", cfg.llm.base_url, "Chat-completion endpoint base URL");
  mock->excludes(base_url);
  app.add_option("--model", cfg.llm.model_id, "Model id");
  app.add_option("--temperature", cfg.llm.temperature, "Sampling temperature")->check(CLI::Range(0.0, 2.0));
  app.add_option("--max-tokens", cfg.llm.max_tokens, "Completion token limit")->check(CLI::PositiveNumber);
  int timeout_ms = static_cast<int>(cfg.llm.timeout.count());
  app.add_option("--timeout-ms", timeout_ms, "Request timeout")->check(CLI::PositiveNumber);
  app.add_option("--repetitions", cfg.repetitions, "Chain runs for compare");
  app.add_option("--parallel", cfg.parallel, "Concurrent chain runs");
  app.add_option("--out", cfg.output_dir, "Output directory");

  auto* solve = app.add_subcommand("solve", "Derive rights and write .trace files");
  auto* explain = app.add_subcommand("explain", "Explain one trace in plain language");
  auto* compare = app.add_subcommand("compare", "Run the explain-then-compare chain");
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score an explanation against its trace");
  evaluate_cmd->add_option("output", cfg.output_path, "Explanation text")->required();
  evaluate_cmd->add_option("trace", cfg.trace_path, "Trace file")->required();
  evaluate_cmd->add_option("--kind", cfg.kind, "translation or comparison");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  cfg.llm.timeout = std::chrono::milliseconds(timeout_ms);

  try {
    if (solve->parsed()) return cmd_solve(cfg, out);
    if (explain->parsed()) return cmd_explain(cfg, out);
    if (compare->parsed()) return cmd_compare(cfg, out, err);
    if (evaluate_cmd->parsed()) return cmd_evaluate(cfg, out);
  } catch (const Failure& f) {
    err << "error: " << f.message << '\n';
    return f.status;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kUsage;
}

}  // namespace lawtrace::cli
