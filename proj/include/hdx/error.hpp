#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hdx {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the arguments was violated (bad dimension, face not in
/// the complex, malformed input).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The mathematical hypotheses of a check do not hold on the given complex,
/// e.g. a link with a disconnected 1-skeleton.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input; carries the 1-based line number.
class ParseError : public InvalidArgument {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InvalidArgument("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace hdx
