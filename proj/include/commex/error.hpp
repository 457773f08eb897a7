#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace commex {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the 1-based line number when known (0 otherwise).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A value outside its mathematical domain (negative weight, probability > 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class DuplicateEdgeError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// A subset or move that violates the size constraints of a criterion.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// A score that is not defined for the given input (edgeless graph, zero volume, ...).
class UndefinedScoreError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> last_iterate)
      : Error(what), last_iterate_(std::move(last_iterate)) {}
  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }

 private:
  std::vector<double> last_iterate_;
};

}  // namespace commex
