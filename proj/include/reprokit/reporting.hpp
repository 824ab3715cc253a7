#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reprokit/model.hpp"
#include "reprokit/primer.hpp"
#include "reprokit/ripper.hpp"
#include "reprokit/suggestion.hpp"

namespace reprokit {

/// One finalized step. Items (i)-(v) of the report are action, component_type,
/// relative_location, activity source reference (activity + source_units) and
/// the component crop.
struct ReportStep {
  int step_num = 1;
  Action action = Action::click();
  std::string component_type;
  std::optional<std::string> component_text;
  GridCell relative_location;
  std::string activity_name;
  std::vector<std::string> source_units;
  std::optional<std::string> crop_address;  // absent for manual steps
  std::optional<std::string> full_shot;     // absent for manual steps
  std::optional<ComponentKey> component_key;
  std::optional<StateFingerprint> state;
  bool manual = false;
  std::string notes;

  bool operator==(const ReportStep&) const = default;
};

struct BugReport {
  std::string report_id;
  std::string app_id;
  std::string app_version;
  std::string draft_id;
  ReportHeader header;
  std::vector<ReportStep> steps;
  std::vector<std::string> full_shots;  // one per resolved step, step order
  std::string created_at;               // UTC, "YYYY-MM-DDTHH:MM:SSZ"

  bool operator==(const BugReport&) const = default;
};

struct FinalizeResult {
  BugReport report;
  std::map<std::string, std::string> shots;  // crops and confirmation shots
};

/// Current UTC time at second precision.
std::string utc_timestamp_now();

/// Freezes a draft into a report. Throws ValidationError for an empty title or
/// a draft without steps, and Error(conflict) if it was already finalized.
FinalizeResult finalize(const ReportDraft& draft, const EventFlowGraph& graph,
                        const StaticAppModel& static_model, const std::string& report_id,
                        const std::string& created_at);

enum class RenderFormat { structured, web_page };

std::optional<RenderFormat> parse_render_format(std::string_view text);

/// Throws Error(unknown_format) for anything but "structured" or "web-page".
std::string render(const BugReport& report, std::string_view format);
std::string render(const BugReport& report, RenderFormat format);
/// Web pages reference screenshots as <shot_prefix><address>.svg.
std::string render(const BugReport& report, RenderFormat format,
                   const std::string& shot_prefix);

BugReport parse_structured_report(std::string_view text,
                                  const std::string& origin = "report");

struct ReplayEntry {
  Action action = Action::click();
  ComponentKey component;
  StateFingerprint expected_after;
  bool external = false;  // the recorded transition needed a back-press

  bool operator==(const ReplayEntry&) const = default;
};

struct ReplayScript {
  std::string app_id;
  std::string app_version;
  std::vector<ReplayEntry> entries;
  StateFingerprint expected_final;

  bool operator==(const ReplayScript&) const = default;
};

bool is_replayable(const BugReport& report, const EventFlowGraph& graph);

/// Throws Error(not_replayable) unless is_replayable.
ReplayScript to_script(const BugReport& report, const EventFlowGraph& graph);

struct ReplayOutcome {
  enum class Status { success, divergence, driver_failure };

  Status status = Status::success;
  int step_num = 0;  // failing step for divergence/driver_failure
  StateFingerprint expected;
  StateFingerprint observed;
  std::string message;
};

std::string_view to_string(ReplayOutcome::Status status) noexcept;

/// Cold-launches, runs every entry and compares fingerprints after each step.
/// Never throws; failures are reported in the outcome.
ReplayOutcome replay(const ReplayScript& script, DeviceDriver& driver);

std::string serialize_script(const ReplayScript& script);

}  // namespace reprokit
