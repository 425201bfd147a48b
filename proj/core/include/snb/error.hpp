#pragma once

#include <stdexcept>
#include <string>

namespace snb {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (lexicon, rule, bilingual or bag file).
class SyntaxError : public Error {
 public:
  SyntaxError(std::string source, int line, const std::string& what)
      : Error("syntax error: " + source + ":" + std::to_string(line) + ": " + what),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const { return source_; }
  int line() const { return line_; }

 private:
  std::string source_;
  int line_;
};

/// A token that no lexicon entry covers.
class UnknownWord : public Error {
 public:
  explicit UnknownWord(std::string word)
      : Error("unknown word: " + word), word_(std::move(word)) {}
  const std::string& word() const { return word_; }

 private:
  std::string word_;
};

class FileError : public Error {
 public:
  explicit FileError(const std::string& what) : Error("file error: " + what) {}
};

}  // namespace snb
