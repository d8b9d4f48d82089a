#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace liverank {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input (edge lists, label files, config text).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what), line_(0) {}

  /// 1-based line number, 0 when not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A node id or count outside the declared range.
class BoundsError : public Error {
 public:
  using Error::Error;
};

/// Mismatched lengths between related inputs.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Caller broke an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration (experiment files, generator parameters).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// I/O failure: missing file, unreadable stream, bad binary header.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Power iteration did not reach the tolerance within the iteration cap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual, int iterations)
      : Error(what), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

}  // namespace liverank
