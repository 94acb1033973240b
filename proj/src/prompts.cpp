#include "lawtrace/prompts.hpp"

#include <openssl/evp.h>

#include <array>
#include <memory>

#include "lawtrace/errors.hpp"

namespace lawtrace {

namespace detail {
extern const std::string_view kTranslationPromptText;
extern const std::string_view kComparisonPromptText;
}  // namespace detail

const PromptTemplate& translation_template() {
  static const PromptTemplate t{PromptId::kTranslation, detail::kTranslationPromptText,
                                "3a2eb17fec8ba52bb01158388a82fad7fbd2ebc222e816d0f8923160f52437f7"};
  return t;
}

const PromptTemplate& comparison_template() {
  static const PromptTemplate t{PromptId::kComparison, detail::kComparisonPromptText,
                                "fde41fe7b2466943091c25b0a72c1a6fea9d6b25a5d474a24e882415532b10dd"};
  return t;
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

namespace {

std::string with_payload(std::string_view instructions, std::string_view payload) {
  std::string out(instructions);
  out += "\n\n```\n";
  out += payload;
  if (payload.empty() || payload.back() != '\n') out.push_back('\n');
  out += "```\n";
  return out;
}

}  // namespace

std::string build_translation_prompt(const TraceDocument& trace) {
  return with_payload(translation_template().text, trace.raw_text);
}

std::string build_comparison_prompt(std::string_view first, std::string_view second) {
  if (first.empty() || second.empty()) throw Error("comparison needs two non-empty explanations");
  std::string payload = "=== SOURCE 1 ===\n";
  payload += first;
  payload += "\n\n=== SOURCE 2 ===\n";
  payload += second;
  return with_payload(comparison_template().text, payload);
}

}  // namespace lawtrace
