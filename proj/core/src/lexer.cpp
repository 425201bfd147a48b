#include "snb/lexer.hpp"

#include <cctype>

namespace snb {

namespace {

bool ident_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '$' || c == '\'' || c >= 0x80;
}

}  // namespace

Lexer::Lexer(std::string_view text, std::string source, int first_line)
    : text_(text), source_(std::move(source)), line_(first_line) {
  current_ = scan();
}

Lexer::Token Lexer::next() {
  Token t = std::move(current_);
  current_ = scan();
  return t;
}

bool Lexer::accept(std::string_view p) {
  if (!is_punct(p)) return false;
  next();
  return true;
}

void Lexer::expect(std::string_view p) {
  if (!accept(p)) {
    fail("expected '" + std::string(p) + "' but found " +
         (at_end() ? std::string("end of input") : "'" + current_.text + "'"));
  }
}

std::string Lexer::expect_ident(std::string_view what) {
  if (current_.kind != Kind::Ident) {
    fail("expected " + std::string(what) + " but found " +
         (at_end() ? std::string("end of input") : "'" + current_.text + "'"));
  }
  return next().text;
}

void Lexer::fail(const std::string& what) const {
  throw SyntaxError(source_, current_.line, what);
}

Lexer::Token Lexer::scan() {
  for (;;) {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
    if (pos_ < text_.size() && text_[pos_] == '%') {
      while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      continue;
    }
    break;
  }
  Token t;
  t.line = line_;
  if (pos_ >= text_.size()) return t;

  const auto c = static_cast<unsigned char>(text_[pos_]);
  if (text_.compare(pos_, 4, "<==>") == 0) {
    t.kind = Kind::Punct;
    t.text = "<==>";
    pos_ += 4;
    return t;
  }
  if (text_.compare(pos_, 2, "->") == 0) {
    t.kind = Kind::Punct;
    t.text = "->";
    pos_ += 2;
    return t;
  }
  if (c == '#') {
    std::size_t end = pos_ + 1;
    while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
    if (end == pos_ + 1) throw SyntaxError(source_, line_, "expected digits after '#'");
    t.kind = Kind::Var;
    t.text = std::string(text_.substr(pos_, end - pos_));
    pos_ = end;
    return t;
  }
  if (ident_char(c)) {
    std::size_t end = pos_;
    while (end < text_.size() && ident_char(static_cast<unsigned char>(text_[end]))) ++end;
    t.text = std::string(text_.substr(pos_, end - pos_));
    t.kind = (std::isupper(c) || c == '_') ? Kind::Var : Kind::Ident;
    pos_ = end;
    return t;
  }
  static constexpr std::string_view kPunct = "(){}[]:,.&@=|";
  if (kPunct.find(static_cast<char>(c)) != std::string_view::npos) {
    t.kind = Kind::Punct;
    t.text = std::string(1, static_cast<char>(c));
    ++pos_;
    return t;
  }
  throw SyntaxError(source_, line_, std::string("unexpected character '") +
                                        static_cast<char>(c) + "'");
}

}  // namespace snb
