#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ratecount {

/// Base for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (CLI exit code 1).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Text input could not be parsed; carries the 1-based line number.
class LineParseError : public InputError {
 public:
  LineParseError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Binary capture could not be parsed; carries the byte offset of the problem.
class CaptureParseError : public InputError {
 public:
  CaptureParseError(std::size_t offset, const std::string& what)
      : InputError("offset " + std::to_string(offset) + ": " + what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Not enough data to produce a result (CLI exit code 2).
class InsufficientData : public Error {
 public:
  using Error::Error;
};

}  // namespace ratecount
