#include "text_cursor.hpp"

#include <cctype>
#include <vector>

namespace lawtrace::detail {

char TextCursor::advance() {
  char c = text_[pos_++];
  if (c == '\n') {
    ++line_;
    column_ = 1;
  } else {
    ++column_;
  }
  return c;
}

void TextCursor::skip_spaces() {
  while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
}

void TextCursor::skip_layout() {
  for (;;) {
    skip_spaces();
    if (!comments_ || peek() != '%') return;
    while (!at_end() && peek() != '\n') advance();
  }
}

std::string_view TextCursor::rest_of_line() {
  std::size_t start = pos_;
  while (!at_end() && peek() != '\n') advance();
  std::string_view line = text_.substr(start, pos_ - start);
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  if (!at_end()) advance();
  return line;
}

void TextCursor::fail(const std::string& message) const { throw ParseError(message, line_, column_); }

void TextCursor::expect(char c) {
  if (peek() != c) {
    if (at_end()) fail(std::string("expected '") + c + "' but reached end of input");
    fail(std::string("expected '") + c + "' but found '" + peek() + "'");
  }
  advance();
}

std::string TextCursor::read_identifier() {
  if (!is_identifier_start(peek())) {
    if (at_end()) fail("expected identifier but reached end of input");
    fail(std::string("expected identifier but found '") + peek() + "'");
  }
  std::string out;
  while (!at_end() && is_identifier_char(peek())) out.push_back(advance());
  return out;
}

Term TextCursor::read_term() {
  skip_layout();
  std::size_t line = line_, column = column_;
  std::string name = read_identifier();
  if (is_variable_name(name)) {
    if (peek() == '(') throw ParseError("variable '" + name + "' used as a functor", line, column);
    return Term::variable(std::move(name));
  }
  if (!is_atom_name(name)) throw ParseError("invalid identifier '" + name + "'", line, column);
  if (peek() != '(') return Term::atom(std::move(name));
  advance();
  std::vector<Term> args;
  for (;;) {
    args.push_back(read_term());
    skip_layout();
    if (peek() == ',') {
      advance();
      continue;
    }
    expect(')');
    break;
  }
  return Term::compound(std::move(name), std::move(args));
}

}  // namespace lawtrace::detail
