#include "reprokit/error.hpp"

namespace reprokit {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_geometry: return "invalid-geometry";
    case ErrorKind::invalid_action: return "invalid-action";
    case ErrorKind::bundle_malformed: return "bundle-malformed";
    case ErrorKind::parse_error: return "parse-error";
    case ErrorKind::duplicate_id: return "duplicate-id";
    case ErrorKind::model_malformed: return "model-malformed";
    case ErrorKind::driver_failure: return "driver-failure";
    case ErrorKind::partial_graph: return "partial-graph";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::stale_suggestion: return "stale-suggestion";
    case ErrorKind::sequencing: return "sequencing";
    case ErrorKind::not_found: return "not-found";
    case ErrorKind::validation: return "validation";
    case ErrorKind::not_replayable: return "not-replayable";
    case ErrorKind::unknown_format: return "unknown-format";
    case ErrorKind::conflict: return "conflict";
    case ErrorKind::io_error: return "io-error";
  }
  return "unknown";
}

std::string ValidationError::summarize(const std::vector<FieldError>& fields) {
  std::string out = "validation failed";
  for (const auto& f : fields) {
    out += "; ";
    out += f.field;
    out += ": ";
    out += f.message;
  }
  return out;
}

}  // namespace reprokit
