#ifndef LAWTRACE_ERRORS_HPP
#define LAWTRACE_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lawtrace {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax error in rule, fact or term text. Positions are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t line, std::size_t column);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  /// The message without the location prefix.
  const std::string& detail() const { return detail_; }

 private:
  std::string detail_;
  std::size_t line_;
  std::size_t column_;
};

/// A variable under negation that nothing binds before the call.
class SafetyError : public Error {
 public:
  SafetyError(std::string variable, std::string clause, std::size_t line);
  const std::string& variable() const { return variable_; }
  std::size_t line() const { return line_; }

 private:
  std::string variable_;
  std::size_t line_;
};

/// Recursion through negation. cycle() lists predicates as name/arity.
class StratificationError : public Error {
 public:
  explicit StratificationError(std::vector<std::string> cycle);
  const std::vector<std::string>& cycle() const { return cycle_; }

 private:
  std::vector<std::string> cycle_;
};

/// Errors of the metadata layer of a knowledge base (duplicate titles, sources).
class KnowledgeBaseError : public Error {
 public:
  using Error::Error;
};

class EngineError : public Error {
 public:
  enum class Kind { kNafNonGround, kDepthLimit, kNonGroundAnswer, kUnknownSource };
  EngineError(Kind kind, std::string message) : Error(std::move(message)), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Malformed trace text or a bundle that cannot be rendered.
class TraceError : public Error {
 public:
  /// line == 0 when the error is not tied to a line (rendering).
  TraceError(std::string message, std::size_t line);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace lawtrace

#endif  // LAWTRACE_ERRORS_HPP
