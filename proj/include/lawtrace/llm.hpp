#ifndef LAWTRACE_LLM_HPP
#define LAWTRACE_LLM_HPP

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "lawtrace/errors.hpp"

namespace lawtrace {

/// Generation settings. Temperature defaults to its minimum to keep repeated
/// runs as stable as the backend allows.
struct LlmConfig {
  std::string model_id = "gpt-4";
  double temperature = 0.0;
  int max_tokens = 2048;
  std::string base_url = "https://api.openai.com/v1";
  std::chrono::milliseconds timeout{120000};

  /// Throws LlmError(kPrecondition) on out-of-range values.
  void validate() const;
};

struct TokenCounts {
  int prompt = 0;
  int completion = 0;
};

struct LlmResponse {
  std::string text;
  std::string model_id;
  std::chrono::milliseconds latency{0};
  TokenCounts tokens;
};

class LlmError : public Error {
 public:
  enum class Kind { kPrecondition, kTransport, kAuthentication, kBackend, kTimeout, kExhausted };

  LlmError(Kind kind, std::string message, bool retryable = false, int status = 0)
      : Error(std::move(message)), kind_(kind), retryable_(retryable), status_(status) {}

  Kind kind() const { return kind_; }
  bool retryable() const { return retryable_; }
  /// HTTP status for kBackend and kAuthentication, 0 otherwise.
  int status() const { return status_; }

 private:
  Kind kind_;
  bool retryable_;
  int status_;
};

std::string_view to_string(LlmError::Kind kind);

/// A completion backend. Implementations must allow concurrent complete() calls.
class CompletionClient {
 public:
  virtual ~CompletionClient() = default;
  /// Returns the backend's text verbatim.
  virtual LlmResponse complete(std::string_view prompt, const LlmConfig& config) = 0;
};

/// Replays canned responses in order and records every prompt it receives.
class MockClient final : public CompletionClient {
 public:
  /// With `cycle`, the queue restarts from the first response once exhausted.
  explicit MockClient(std::vector<std::string> responses, bool cycle = false);

  LlmResponse complete(std::string_view prompt, const LlmConfig& config) override;

  std::vector<std::string> recorded_prompts() const;
  std::size_t calls() const;

 private:
  mutable std::mutex mutex_;
  std::vector<std::string> responses_;
  std::vector<std::string> prompts_;
  std::size_t next_ = 0;
  bool cycle_;
};

/// Loads `001.txt`, `002.txt`, ... (any all-digit stem) in numeric order.
/// Throws Error when the directory cannot be read.
std::unique_ptr<MockClient> mock_from_dir(const std::filesystem::path& dir, bool cycle = false);

struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{500};
};

/// Chat-completion client: POST {base_url}/chat/completions with a JSON body
/// carrying model, temperature, max_tokens and a single user message.
class HttpClient final : public CompletionClient {
 public:
  static constexpr const char* kApiKeyVariable = "LLM_API_KEY";

  explicit HttpClient(std::string api_key, RetryPolicy retry = {});
  /// Reads the key from LLM_API_KEY; throws LlmError(kAuthentication) if unset or empty.
  static std::unique_ptr<HttpClient> from_environment(RetryPolicy retry = {});

  LlmResponse complete(std::string_view prompt, const LlmConfig& config) override;

 private:
  LlmResponse attempt(std::string_view prompt, const LlmConfig& config) const;

  std::string api_key_;
  RetryPolicy retry_;
};

}  // namespace lawtrace

#endif  // LAWTRACE_LLM_HPP
