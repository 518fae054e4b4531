#pragma once

#include <stdexcept>
#include <string>

namespace eqgram {

// Malformed arguments or out-of-range indices.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A documented precondition of an operation does not hold.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Desk-scale bound (expansion length, merged pairs, ...) exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fingerprints agreed but the boundary check says the strings differ.
class FingerprintInconsistency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Broken internal invariant; indicates a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Text parse failure with the offending line number (1-based).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace eqgram
