#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gvc {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix/vector shapes do not match the documented contract.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A scalar parameter is outside its admissible range.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// File or stream could not be read/written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data; carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  explicit ParseError(const std::string& message) : Error(message), line_(0) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// The transient matrix has spectral radius too close to (or above) one.
class NonAbsorbingChainError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver did not reach its tolerance within the iteration cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A converged dominant eigenvector has a nonpositive entry.
class IrreducibilityError : public Error {
 public:
  using Error::Error;
};

/// The propagated survival mass underflowed to zero at step `last_step`.
class ExtinctionError : public Error {
 public:
  ExtinctionError(const std::string& message, std::int64_t last_step)
      : Error(message), last_step_(last_step) {}
  std::int64_t last_step() const { return last_step_; }

 private:
  std::int64_t last_step_;
};

/// A resolvent-style series does not converge for the requested parameter.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Rank correlation is undefined (zero rank variance in an input).
class UndefinedCorrelationError : public Error {
 public:
  using Error::Error;
};

}  // namespace gvc
