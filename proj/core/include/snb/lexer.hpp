#pragma once

#include <string>
#include <string_view>

#include "snb/error.hpp"

namespace snb {

/// Tokenizer shared by the lexicon, rule, bilingual and bag file readers.
/// `%` starts a comment that runs to end of line.
class Lexer {
 public:
  enum class Kind { Ident, Var, Punct, End };

  struct Token {
    Kind kind = Kind::End;
    std::string text;
    int line = 1;
  };

  Lexer(std::string_view text, std::string source, int first_line = 1);

  const Token& peek() const { return current_; }
  Token next();

  bool at_end() const { return current_.kind == Kind::End; }
  bool is_punct(std::string_view p) const {
    return current_.kind == Kind::Punct && current_.text == p;
  }
  bool is_ident(std::string_view word) const {
    return current_.kind == Kind::Ident && current_.text == word;
  }

  /// Consumes `p` if it is next; returns whether it did.
  bool accept(std::string_view p);
  void expect(std::string_view p);
  std::string expect_ident(std::string_view what);

  [[noreturn]] void fail(const std::string& what) const;

  const std::string& source() const { return source_; }
  int line() const { return current_.line; }

 private:
  Token scan();

  std::string_view text_;
  std::string source_;
  std::size_t pos_ = 0;
  int line_ = 1;
  Token current_;
};

}  // namespace snb
