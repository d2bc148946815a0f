#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace layerlab {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Text does not match the declared format's grammar.
class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t line = 0, std::size_t column = 0);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

/// Graph contents violate a model invariant (dangling endpoint, duplicate id, bad weight).
class GraphError : public Error {
 public:
  using Error::Error;
};

/// A precondition of an operation cannot be met by its inputs.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Emitting a graph in the requested format would drop information.
class LossyEmissionError : public InfeasibleError {
 public:
  using InfeasibleError::InfeasibleError;
};

/// Parsed value and ground truth belong to different task families.
class ScoreTypeError : public Error {
 public:
  using Error::Error;
};

/// Chat backend failed after exhausting its retry budget.
class TransportError : public Error {
 public:
  TransportError(std::string message, int attempts, int status = 0)
      : Error(std::move(message)), attempts_(attempts), status_(status) {}

  int attempts() const noexcept { return attempts_; }
  int status() const noexcept { return status_; }

 private:
  int attempts_;
  int status_;
};

/// The remote endpoint kept answering 429 until the retry budget ran out.
class RateLimitError : public TransportError {
 public:
  using TransportError::TransportError;
};

/// Replay transcript has no response for the requested spec id.
class ReplayMissError : public Error {
 public:
  using Error::Error;
};

}  // namespace layerlab
