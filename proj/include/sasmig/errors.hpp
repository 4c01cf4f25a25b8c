#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sasmig {

/// Malformed or truncated file contents. Carries the byte offset at which
/// parsing failed (or -1 when the failure is not tied to an offset).
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::int64_t byte_offset = -1)
      : std::runtime_error(what), byte_offset_(byte_offset) {}

  std::int64_t byte_offset() const { return byte_offset_; }

private:
  std::int64_t byte_offset_;
};

/// Non-finite values or solver breakdown inside a numerical kernel.
/// step and row locate the failure when it happens inside a time stepper.
class NumericalError : public std::runtime_error {
public:
  NumericalError(const std::string& what, long step = -1, long row = -1)
      : std::runtime_error(what), step_(step), row_(row) {}

  long step() const { return step_; }
  long row() const { return row_; }

private:
  long step_;
  long row_;
};

/// Requested feature of the data does not exist (e.g. no local maximum
/// inside a search window).
class NotFoundError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace sasmig
