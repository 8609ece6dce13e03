#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace baytta {

enum class ErrorKind {
  SingleClass,
  NonFinite,
  DimensionMismatch,
  TooManyColumns,
  InvalidArgument,
  EmptyRow,
  OutOfRange,
  LengthMismatch,
  Empty,
  MissingHeader,
  RaggedRow,
  NonBinaryLabel,
  InvalidNumber,
  EmptyTable,
  IoError,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingleClass: return "SingleClass";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::TooManyColumns: return "TooManyColumns";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::EmptyRow: return "EmptyRow";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::Empty: return "Empty";
    case ErrorKind::MissingHeader: return "MissingHeader";
    case ErrorKind::RaggedRow: return "RaggedRow";
    case ErrorKind::NonBinaryLabel: return "NonBinaryLabel";
    case ErrorKind::InvalidNumber: return "InvalidNumber";
    case ErrorKind::EmptyTable: return "EmptyTable";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

/// Library-wide exception. `line` and `column` are 1-based file locations
/// for CSV errors and 0 when not applicable.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::size_t line = 0,
        std::size_t column = 0)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        line_(line),
        column_(column) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  ErrorKind kind_;
  std::size_t line_;
  std::size_t column_;
};

}  // namespace baytta
