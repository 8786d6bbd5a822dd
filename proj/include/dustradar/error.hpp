#pragma once

#include <stdexcept>
#include <string>

namespace dustradar {

enum class ErrorKind {
  kNonFinite,
  kAngleOutOfRange,
  kAngularMismatch,
  kNegativeRange,
  kNegativeRadius,
  kZeroMinSize,
  kEmptyCluster,
  kIndexOutOfRange,
  kMismatchedClustering,
  kInvalidConfig,
  kInvalidSpec,
  kParseError,
  kNonMonotonicSeq,
  kFrameMismatch,
  kSinkError,
};

const char* to_string(ErrorKind kind);

// All library failures are reported through this type. Callers that care
// about the category inspect kind(); the CLI maps every Error to exit code 2.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Errors tied to a position in a line-oriented input.
class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, std::size_t line, const std::string& detail)
      : Error(kind, "line " + std::to_string(line) + ": " + detail),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace dustradar
