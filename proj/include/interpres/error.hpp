#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace interpres {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  enum class Kind { Syntax, UnknownSymbol, ArityMismatch };

  ParseError(Kind kind, std::size_t position, const std::string& what)
      : Error("at position " + std::to_string(position) + ": " + what),
        kind_(kind),
        position_(position) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t position() const noexcept { return position_; }

 private:
  Kind kind_;
  std::size_t position_;
};

// Signature misuse outside the parser: duplicate names, bad arities.
class SignatureError : public Error {
 public:
  using Error::Error;
};

// Uncovered free variable or a symbol the structure does not interpret.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

// A side condition failed: not an equivalence, not a congruence, not
// well-founded, empty domain, ...
class ValidationError : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace interpres
