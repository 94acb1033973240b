#ifndef LAWTRACE_TEXT_CURSOR_HPP
#define LAWTRACE_TEXT_CURSOR_HPP

#include <cstddef>
#include <string>
#include <string_view>

#include "lawtrace/errors.hpp"
#include "lawtrace/term.hpp"

namespace lawtrace::detail {

// Position-tracking reader over a text buffer. Lines and columns are 1-based.
class TextCursor {
 public:
  // With `comments` off, `%` is an ordinary character (free-text scanning).
  explicit TextCursor(std::string_view text, bool comments = true) : text_(text), comments_(comments) {}

  bool at_end() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  std::size_t pos() const { return pos_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  bool at_line_start() const { return pos_ == 0 || text_[pos_ - 1] == '\n'; }

  char advance();
  void skip_spaces();
  // Skips whitespace and `%` comments up to the next token.
  void skip_layout();
  std::string_view rest_of_line();

  [[noreturn]] void fail(const std::string& message) const;
  void expect(char c);

  std::string read_identifier();
  Term read_term();

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  bool comments_;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

}  // namespace lawtrace::detail

#endif  // LAWTRACE_TEXT_CURSOR_HPP
