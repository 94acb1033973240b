#include "lawtrace/llm.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace lawtrace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

std::string_view to_string(LlmError::Kind kind) {
  switch (kind) {
    case LlmError::Kind::kPrecondition: return "precondition";
    case LlmError::Kind::kTransport: return "transport";
    case LlmError::Kind::kAuthentication: return "authentication";
    case LlmError::Kind::kBackend: return "backend";
    case LlmError::Kind::kTimeout: return "timeout";
    case LlmError::Kind::kExhausted: return "exhausted";
  }
  return "";
}

void LlmConfig::validate() const {
  auto fail = [](const std::string& m) { throw LlmError(LlmError::Kind::kPrecondition, m); };
  if (model_id.empty()) fail("model id is empty");
  if (!(temperature >= 0.0 && temperature <= 2.0)) fail("temperature must be in [0, 2]");
  if (max_tokens <= 0) fail("max_tokens must be positive");
  if (timeout.count() <= 0) fail("timeout must be positive");
}

namespace {
void require_prompt(std::string_view prompt) {
  if (prompt.empty()) throw LlmError(LlmError::Kind::kPrecondition, "empty prompt");
}
}  // namespace

MockClient::MockClient(std::vector<std::string> responses, bool cycle)
    : responses_(std::move(responses)), cycle_(cycle) {}

LlmResponse MockClient::complete(std::string_view prompt, const LlmConfig& config) {
  require_prompt(prompt);
  config.validate();
  std::lock_guard lock(mutex_);
  if (next_ >= responses_.size() && !(cycle_ && !responses_.empty())) {
    throw LlmError(LlmError::Kind::kExhausted,
                   "mock response queue exhausted after " + std::to_string(next_) + " calls");
  }
  prompts_.emplace_back(prompt);
  LlmResponse r;
  r.text = responses_[next_ % responses_.size()];
  r.model_id = config.model_id;
  ++next_;
  return r;
}

std::vector<std::string> MockClient::recorded_prompts() const {
  std::lock_guard lock(mutex_);
  return prompts_;
}

std::size_t MockClient::calls() const {
  std::lock_guard lock(mutex_);
  return prompts_.size();
}

std::unique_ptr<MockClient> mock_from_dir(const std::filesystem::path& dir, bool cycle) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error("cannot read mock directory " + dir.string());
  std::vector<std::pair<unsigned long, fs::path>> files;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
    std::string stem = entry.path().stem().string();
    if (stem.empty() || !std::all_of(stem.begin(), stem.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      continue;
    }
    files.emplace_back(std::stoul(stem), entry.path());
  }
  if (ec) throw Error("cannot read mock directory " + dir.string() + ": " + ec.message());
  std::sort(files.begin(), files.end());
  std::vector<std::string> responses;
  for (const auto& [n, path] : files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    responses.push_back(buf.str());
  }
  return std::make_unique<MockClient>(std::move(responses), cycle);
}

HttpClient::HttpClient(std::string api_key, RetryPolicy retry) : api_key_(std::move(api_key)), retry_(retry) {
  if (api_key_.empty()) throw LlmError(LlmError::Kind::kAuthentication, "empty API key");
}

std::unique_ptr<HttpClient> HttpClient::from_environment(RetryPolicy retry) {
  const char* key = std::getenv(kApiKeyVariable);
  if (!key || !*key) {
    throw LlmError(LlmError::Kind::kAuthentication, std::string(kApiKeyVariable) + " is not set");
  }
  return std::make_unique<HttpClient>(key, retry);
}

LlmResponse HttpClient::complete(std::string_view prompt, const LlmConfig& config) {
  require_prompt(prompt);
  config.validate();
  auto backoff = retry_.initial_backoff;
  for (int attempt_no = 0;; ++attempt_no) {
    try {
      return attempt(prompt, config);
    } catch (const LlmError& e) {
      if (!e.retryable() || attempt_no >= retry_.max_retries) throw;
    }
    std::this_thread::sleep_for(backoff);
    backoff *= 2;
  }
}

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw LlmError(LlmError::Kind::kPrecondition, "base URL without scheme: " + url);
  }
  auto path_start = url.find('/', scheme_end + 3);
  Endpoint e;
  e.origin = url.substr(0, path_start);
  e.path = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!e.path.empty() && e.path.back() == '/') e.path.pop_back();
  e.path += "/chat/completions";
  return e;
}

std::string backend_message(const std::string& body) {
  auto parsed = json::parse(body, nullptr, false);
  if (parsed.is_object() && parsed.contains("error")) {
    const auto& err = parsed["error"];
    if (err.is_object() && err.contains("message") && err["message"].is_string()) return err["message"];
    if (err.is_string()) return err;
  }
  return body.substr(0, 200);
}

}  // namespace

LlmResponse HttpClient::attempt(std::string_view prompt, const LlmConfig& config) const {
  const Endpoint endpoint = split_url(config.base_url);
  httplib::Client client(endpoint.origin);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(config.timeout);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(config.timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());
  client.set_bearer_token_auth(api_key_);

  json body = {{"model", config.model_id},
               {"temperature", config.temperature},
               {"max_tokens", config.max_tokens},
               {"messages", json::array({{{"role", "user"}, {"content", std::string(prompt)}}})}};

  const auto start = Clock::now();
  auto result = client.Post(endpoint.path, body.dump(), "application/json");
  const auto latency = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);

  if (!result) {
    const auto err = result.error();
    const std::string what = httplib::to_string(err);
    if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read) {
      // httplib reports read timeouts as Read errors.
      if (latency >= config.timeout) throw LlmError(LlmError::Kind::kTimeout, "request timed out: " + what, true);
    }
    throw LlmError(LlmError::Kind::kTransport, "transport error: " + what, true);
  }
  const int status = result->status;
  if (status == 401 || status == 403) {
    throw LlmError(LlmError::Kind::kAuthentication, "authentication rejected: " + backend_message(result->body),
                   false, status);
  }
  if (status != 200) {
    const bool retryable = status == 429 || status >= 500;
    throw LlmError(LlmError::Kind::kBackend,
                   "backend error " + std::to_string(status) + ": " + backend_message(result->body), retryable,
                   status);
  }

  auto parsed = json::parse(result->body, nullptr, false);
  LlmResponse r;
  r.latency = latency;
  try {
    r.text = parsed.at("choices").at(0).at("message").at("content").get<std::string>();
    r.model_id = parsed.value("model", config.model_id);
    if (parsed.contains("usage") && parsed["usage"].is_object()) {
      r.tokens.prompt = parsed["usage"].value("prompt_tokens", 0);
      r.tokens.completion = parsed["usage"].value("completion_tokens", 0);
    }
  } catch (const json::exception& e) {
    throw LlmError(LlmError::Kind::kBackend, std::string("malformed completion response: ") + e.what(), false, status);
  }
  if (r.text.empty()) throw LlmError(LlmError::Kind::kBackend, "empty completion", false, status);
  return r;
}

}  // namespace lawtrace
