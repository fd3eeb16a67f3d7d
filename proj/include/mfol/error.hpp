#pragma once

#include <stdexcept>
#include <string>

namespace mfol {

/// Base class of every domain error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A complex, curve system or foliation violates a structural invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A precondition of a surgery or search operation is not met.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace mfol
