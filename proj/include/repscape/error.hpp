#pragma once

#include <stdexcept>
#include <string>

namespace repscape {

/// Broad failure class. Drives CLI exit codes (usage=2, data=3,
/// computation=4) and HTTP status mapping in the service.
enum class ErrorKind { usage, data, computation };

/// Base exception for everything the engine throws on purpose.
/// `code()` is a stable machine-readable token ("empty_after_filter",
/// "degenerate_projection", ...) surfaced verbatim by the service.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

class DataError : public Error {
 public:
  DataError(std::string code, const std::string& message)
      : Error(ErrorKind::data, std::move(code), message) {}
};

class ComputationError : public Error {
 public:
  ComputationError(std::string code, const std::string& message)
      : Error(ErrorKind::computation, std::move(code), message) {}
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& message)
      : Error(ErrorKind::usage, "invalid_argument", message) {}
};

/// CSV ingestion failure. Row numbers count data rows from 1 (the header
/// is row 0); column is the header name of the offending field.
class IngestError : public DataError {
 public:
  IngestError(std::size_t row, std::string column, const std::string& what)
      : DataError("ingest_error", "row " + std::to_string(row) + ", column " + column + ": " + what),
        row_(row),
        column_(std::move(column)) {}

  std::size_t row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

}  // namespace repscape
