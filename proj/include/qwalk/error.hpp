#ifndef QWALK_ERROR_HPP
#define QWALK_ERROR_HPP

#include <stdexcept>
#include <string>

namespace qwalk {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid construction parameters (graph family arguments, tolerances, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed edge-list or JSON input. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_ = 0;
};

/// A corona specification that does not fit together (e.g. satellite count).
class SpecError : public Error {
 public:
  using Error::Error;
};

/// The regularity / size hypotheses of a closed-form routine are violated.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Matrix has the wrong shape or is not symmetric.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// The numerical eigensolver failed.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Spectral data is incomplete (missing projector entry, unknown eigenvalue).
class DataError : public Error {
 public:
  using Error::Error;
};

/// square_free_part could not resolve the residual cofactor.
class FactorizationLimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace qwalk

#endif  // QWALK_ERROR_HPP
