#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace reprokit {

// Stable error categories. The service maps these onto HTTP status codes and
// the CLI onto exit codes, so values must not be renumbered.
enum class ErrorKind {
  invalid_geometry,
  invalid_action,
  bundle_malformed,
  parse_error,
  duplicate_id,
  model_malformed,
  driver_failure,
  partial_graph,
  precondition,
  stale_suggestion,
  sequencing,
  not_found,
  validation,
  not_replayable,
  unknown_format,
  conflict,
  io_error,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// XML or structured-text syntax failure, positioned in a file.
class ParseError : public Error {
 public:
  ParseError(std::string file, long line, const std::string& message)
      : Error(ErrorKind::parse_error,
              file + ":" + std::to_string(line) + ": " + message),
        file_(std::move(file)),
        line_(line) {}

  const std::string& file() const noexcept { return file_; }
  long line() const noexcept { return line_; }

 private:
  std::string file_;
  long line_;
};

struct FieldError {
  std::string field;
  std::string message;

  bool operator==(const FieldError&) const = default;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<FieldError> fields)
      : Error(ErrorKind::validation, summarize(fields)),
        fields_(std::move(fields)) {}
  ValidationError(std::string field, std::string message)
      : ValidationError(std::vector<FieldError>{{std::move(field), std::move(message)}}) {}

  const std::vector<FieldError>& fields() const noexcept { return fields_; }

 private:
  static std::string summarize(const std::vector<FieldError>& fields);

  std::vector<FieldError> fields_;
};

}  // namespace reprokit
