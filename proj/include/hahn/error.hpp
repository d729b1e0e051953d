#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hahn {

// Mirrors the process exit codes of the CLI and the status codes of the C API.
enum class ErrorKind {
  Input = 2,        // malformed text, out-of-range parameters, wrong domain kind
  Degenerate = 3,   // mathematically degenerate input (vanishing jets, real a, ...)
  TheoremCase = 4,  // the requested construction belongs to another case of the classification
  Region = 5,       // evaluation outside the analyticity region / pole
  Numeric = 6,      // a numerical tripwire fired (no convergence, bad conditioning)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : Error(ErrorKind::Input, what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace hahn
