#include "reprokit/reporting.hpp"

#include <chrono>
#include <ctime>

#include "reprokit/documents.hpp"
#include "reprokit/error.hpp"
#include "reprokit/screenshot.hpp"

namespace reprokit {

std::string utc_timestamp_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

FinalizeResult finalize(const ReportDraft& draft, const EventFlowGraph& graph,
                        const StaticAppModel& static_model, const std::string& report_id,
                        const std::string& created_at) {
  if (draft.finalized_as) {
    throw Error(ErrorKind::conflict, "draft " + draft.draft_id + " was already finalized as " +
                                         *draft.finalized_as);
  }
  std::vector<FieldError> problems;
  if (draft.header.title.empty()) problems.push_back({"title", "must not be empty"});
  if (draft.steps.empty()) problems.push_back({"steps", "at least one step is required"});
  if (!problems.empty()) throw ValidationError(std::move(problems));

  FinalizeResult out;
  auto& report = out.report;
  report.report_id = report_id;
  report.app_id = draft.app_id;
  report.app_version = draft.app_version;
  report.draft_id = draft.draft_id;
  report.header = draft.header;
  report.created_at = created_at;

  for (const auto& step : draft.steps) {
    ReportStep rs;
    rs.step_num = step.step_num;
    rs.action = step.action;
    rs.notes = step.notes;
    if (const auto* resolved = step.resolved()) {
      const auto* state = graph.find_state(resolved->state);
      const auto* comp = state ? state->find(resolved->key) : nullptr;
      if (!comp) {
        throw ValidationError("steps[" + std::to_string(step.step_num) + "]",
                                "component " + to_string(resolved->key) +
                                    " is not in the analyzed model");
      }
      rs.component_type = comp->component_type;
      rs.component_text = comp->text;
      rs.relative_location = comp->relative_location;
      rs.activity_name = state->activity_name;
      const auto* declared = static_model.find(resolved->key);
      rs.source_units = declared ? declared->source_units : comp->source_units;
      rs.component_key = resolved->key;
      rs.state = resolved->state;

      const auto full = render_screen(*state);
      auto cropped = crop(full, *comp);
      auto confirmed = augment(full, *comp);
      rs.crop_address = cropped.address;
      rs.full_shot = confirmed.doc.address;
      report.full_shots.push_back(confirmed.doc.address);
      out.shots.emplace(cropped.address, std::move(cropped.bytes));
      out.shots.emplace(confirmed.doc.address, std::move(confirmed.doc.bytes));
    } else {
      const auto& manual = std::get<ManualComponent>(step.component);
      rs.manual = true;
      rs.component_type = manual.component_type;
      rs.component_text = manual.text;
      rs.relative_location = manual.relative_location;
      rs.activity_name = step.activity_name;
    }
    report.steps.push_back(std::move(rs));
  }
  return out;
}

std::optional<RenderFormat> parse_render_format(std::string_view text) {
  if (text == "structured") return RenderFormat::structured;
  if (text == "web-page") return RenderFormat::web_page;
  return std::nullopt;
}

namespace {

std::string activity_source(const ReportStep& s) {
  std::string out = s.activity_name.empty() ? "unknown activity" : s.activity_name;
  if (!s.source_units.empty()) {
    out += " (";
    for (std::size_t i = 0; i < s.source_units.size(); ++i) {
      if (i) out += ", ";
      out += s.source_units[i];
    }
    out += ")";
  }
  return out;
}

std::string web_page(const BugReport& r, const std::string& shot_prefix) {
  const auto esc = [](std::string_view t) { return xml_escape(t); };
  std::string h;
  h += "<!DOCTYPE html>\n";
  h += "<html xmlns=\"http://www.w3.org/1999/xhtml\" lang=\"en\">\n";
  h += "<head><meta charset=\"utf-8\"/><title>" + esc(r.report_id + ": " + r.header.title) +
       "</title></head>\n<body>\n";
  h += "<h1>" + esc(r.header.title) + "</h1>\n";

  h += "<section id=\"preliminary\" class=\"report-section\">\n<h2>Preliminary "
       "information</h2>\n<dl>\n";
  const std::pair<const char*, std::string> info[] = {
      {"Report ID", r.report_id},
      {"Application", r.app_id + " " + r.app_version},
      {"Reporter", r.header.reporter_name},
      {"Device", r.header.device},
      {"Orientation", std::string(to_string(r.header.orientation))},
      {"Created", r.created_at},
      {"Description", r.header.description}};
  for (const auto& [label, value] : info) {
    h += "<dt>" + esc(label) + "</dt><dd>" + esc(value) + "</dd>\n";
  }
  h += "</dl>\n</section>\n";

  h += "<section id=\"steps\" class=\"report-section\">\n<h2>Steps to reproduce</h2>\n<ol>\n";
  for (const auto& s : r.steps) {
    h += "<li class=\"step\" data-step=\"" + std::to_string(s.step_num) + "\">";
    h += "<span class=\"action\">" + esc(describe(s.action)) + "</span> ";
    h += "<span class=\"component-type\">" + esc(s.component_type) + "</span> ";
    if (s.component_text) {
      h += "<span class=\"component-text\">" + esc(*s.component_text) + "</span> ";
    }
    h += "<span class=\"relative-location\">" + esc(to_string(s.relative_location)) +
         "</span> ";
    h += "<span class=\"activity-source\">" + esc(activity_source(s)) + "</span> ";
    if (s.crop_address) {
      h += "<img class=\"component-image\" src=\"" + esc(shot_prefix + *s.crop_address) +
           ".svg\" alt=\"" + esc(s.component_type) + "\"/>";
    } else {
      h += "<span class=\"component-image manual\">" + esc(s.component_type) + " \"" +
           esc(s.component_text.value_or("")) + "\" at " +
           esc(to_string(s.relative_location)) + "</span>";
    }
    if (!s.notes.empty()) h += " <span class=\"notes\">" + esc(s.notes) + "</span>";
    h += "</li>\n";
  }
  h += "</ol>\n</section>\n";

  h += "<section id=\"gallery\" class=\"report-section\">\n<h2>Screenshots</h2>\n";
  for (const auto& s : r.steps) {
    if (!s.full_shot) continue;
    h += "<figure class=\"gallery-entry\" data-step=\"" + std::to_string(s.step_num) +
         "\"><img src=\"" + esc(shot_prefix + *s.full_shot) + ".svg\" alt=\"step " +
         std::to_string(s.step_num) + "\"/><figcaption>Step " +
         std::to_string(s.step_num) + "</figcaption></figure>\n";
  }
  h += "</section>\n</body>\n</html>\n";
  return h;
}

}  // namespace

std::string render(const BugReport& report, RenderFormat format) {
  return render(report, format, "shots/");
}

std::string render(const BugReport& report, RenderFormat format,
                   const std::string& shot_prefix) {
  if (format == RenderFormat::structured) return to_document(Json(report));
  return web_page(report, shot_prefix);
}

std::string render(const BugReport& report, std::string_view format) {
  auto parsed = parse_render_format(format);
  if (!parsed) {
    throw Error(ErrorKind::unknown_format, "unknown report format '" + std::string(format) +
                                               "' (expected structured or web-page)");
  }
  return render(report, *parsed);
}

BugReport parse_structured_report(std::string_view text, const std::string& origin) {
  try {
    return report_from_json(parse_document(text, origin));
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::parse_error, origin + ": " + e.what());
  }
}

namespace {

// Walks the recorded transition chain from the main state. Returns the chained
// transitions, or nullopt where the chain breaks.
std::optional<std::vector<const Transition*>> chain(const BugReport& report,
                                                    const EventFlowGraph& graph) {
  std::vector<const Transition*> out;
  auto current = graph.main_state;
  for (const auto& step : report.steps) {
    if (step.manual || !step.component_key || !step.state || *step.state != current) {
      return std::nullopt;
    }
    const Transition* match = nullptr;
    for (const auto* t : graph.transitions_from(current)) {
      if (t->component == *step.component_key && t->action.kind() == step.action.kind()) {
        match = t;
        break;
      }
    }
    if (!match) return std::nullopt;
    out.push_back(match);
    current = match->to;
  }
  return out;
}

}  // namespace

bool is_replayable(const BugReport& report, const EventFlowGraph& graph) {
  if (report.app_id != graph.app_id) return false;
  return chain(report, graph).has_value();
}

ReplayScript to_script(const BugReport& report, const EventFlowGraph& graph) {
  auto links = report.app_id == graph.app_id ? chain(report, graph) : std::nullopt;
  if (!links) {
    throw Error(ErrorKind::not_replayable,
                "report " + report.report_id + " does not chain through recorded transitions");
  }
  ReplayScript script;
  script.app_id = report.app_id;
  script.app_version = report.app_version;
  script.expected_final = graph.main_state;
  for (std::size_t i = 0; i < links->size(); ++i) {
    const auto* t = (*links)[i];
    script.entries.push_back(
        ReplayEntry{report.steps[i].action, t->component, t->to, t->external});
    script.expected_final = t->to;
  }
  return script;
}

std::string_view to_string(ReplayOutcome::Status status) noexcept {
  switch (status) {
    case ReplayOutcome::Status::success: return "success";
    case ReplayOutcome::Status::divergence: return "divergence";
    case ReplayOutcome::Status::driver_failure: return "driver_failure";
  }
  return "success";
}

ReplayOutcome replay(const ReplayScript& script, DeviceDriver& driver) {
  ReplayOutcome outcome;
  int step = 0;
  auto diverged = [&](int at, const StateFingerprint& expected, StateFingerprint observed,
                      std::string message) {
    outcome.status = ReplayOutcome::Status::divergence;
    outcome.step_num = at;
    outcome.expected = expected;
    outcome.observed = std::move(observed);
    outcome.message = std::move(message);
    return outcome;
  };
  try {
    driver.launch_app(true);
    for (const auto& entry : script.entries) {
      ++step;
      const auto result = driver.perform(entry.action, entry.component);
      if (result.kind == OutcomeKind::external) driver.press_back();
      if (result.kind == OutcomeKind::app_exited || driver.at_home()) {
        return diverged(step, entry.expected_after, {}, "app left the foreground");
      }
      auto observed = fingerprint(driver.current_screen());
      if (observed != entry.expected_after) {
        return diverged(step, entry.expected_after, observed, "unexpected screen");
      }
    }
    auto final_fp = fingerprint(driver.current_screen());
    if (final_fp != script.expected_final) {
      return diverged(step, script.expected_final, final_fp, "unexpected final screen");
    }
  } catch (const std::exception& e) {
    outcome.status = ReplayOutcome::Status::driver_failure;
    outcome.step_num = step;
    outcome.message = e.what();
    return outcome;
  }
  outcome.expected = script.expected_final;
  outcome.observed = script.expected_final;
  return outcome;
}

std::string serialize_script(const ReplayScript& script) {
  return to_document(Json(script));
}

}  // namespace reprokit
