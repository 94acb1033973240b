#include "lawtrace/errors.hpp"

namespace lawtrace {

ParseError::ParseError(std::string message, std::size_t line, std::size_t column)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      detail_(std::move(message)),
      line_(line),
      column_(column) {}

SafetyError::SafetyError(std::string variable, std::string clause, std::size_t line)
    : Error("line " + std::to_string(line) + ": unsafe variable " + variable +
            " under negation in clause: " + clause),
      variable_(std::move(variable)),
      line_(line) {}

namespace {
std::string describe_cycle(const std::vector<std::string>& cycle) {
  std::string out = "negation cycle: ";
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    if (i) out += " -> ";
    out += cycle[i];
  }
  if (!cycle.empty()) out += " -> " + cycle.front();
  return out;
}
}  // namespace

StratificationError::StratificationError(std::vector<std::string> cycle)
    : Error(describe_cycle(cycle)), cycle_(std::move(cycle)) {}

TraceError::TraceError(std::string message, std::size_t line)
    : Error(line ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

}  // namespace lawtrace
