#include "reprokit/documents.hpp"

#include "reprokit/error.hpp"

namespace reprokit {

namespace {

std::optional<std::string> opt_string(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::string>();
}

template <typename T>
Json opt_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json();
}

std::string_view mode_name(BeliefState::Mode m) {
  switch (m) {
    case BeliefState::Mode::cold_start: return "cold-start";
    case BeliefState::Mode::tracked: return "tracked";
    case BeliefState::Mode::all_known: return "all-known";
  }
  return "cold-start";
}

}  // namespace

void to_json(Json& j, const BeliefState& b) {
  j = Json{{"mode", std::string(mode_name(b.mode))}, {"candidates", b.candidates}};
}

void from_json(const Json& j, BeliefState& b) {
  const auto mode = j.at("mode").get<std::string>();
  if (mode == "cold-start") {
    b.mode = BeliefState::Mode::cold_start;
  } else if (mode == "tracked") {
    b.mode = BeliefState::Mode::tracked;
  } else if (mode == "all-known") {
    b.mode = BeliefState::Mode::all_known;
  } else {
    throw Error(ErrorKind::parse_error, "unknown belief mode '" + mode + "'");
  }
  b.candidates = j.at("candidates").get<std::vector<StateFingerprint>>();
}

void to_json(Json& j, const ReportHeader& h) {
  j = Json{{"reporter_name", h.reporter_name},
           {"device", h.device},
           {"orientation", std::string(to_string(h.orientation))},
           {"title", h.title},
           {"description", h.description}};
}

void from_json(const Json& j, ReportHeader& h) {
  h.reporter_name = j.value("reporter_name", "");
  h.device = j.value("device", "");
  const auto o = j.value("orientation", "portrait");
  auto parsed = parse_orientation(o);
  if (!parsed) {
    throw ValidationError("orientation", "must be 'portrait' or 'landscape'");
  }
  h.orientation = *parsed;
  h.title = j.value("title", "");
  h.description = j.value("description", "");
}

void to_json(Json& j, const ReproStep& s) {
  j = Json{{"step_num", s.step_num},
           {"action", s.action},
           {"activity", s.activity_name},
           {"notes", s.notes}};
  if (const auto* r = s.resolved()) {
    j["component"] = Json{{"key", r->key}, {"state", r->state}, {"shot", r->shot}};
  } else {
    const auto& m = std::get<ManualComponent>(s.component);
    j["manual"] = Json{{"type", m.component_type},
                       {"text", m.text},
                       {"relative_location", m.relative_location}};
  }
}

ReproStep step_from_json(const Json& j) {
  ReproStep s;
  s.step_num = j.value("step_num", 0);
  s.action = action_from_json(j.at("action"));
  s.activity_name = j.value("activity", "");
  s.notes = j.value("notes", "");
  if (j.contains("component") && !j.at("component").is_null()) {
    const auto& c = j.at("component");
    s.component = ResolvedComponent{c.at("key").get<ComponentKey>(),
                                    c.at("state").get<StateFingerprint>(),
                                    c.at("shot").get<std::string>()};
  } else if (j.contains("manual") && !j.at("manual").is_null()) {
    const auto& m = j.at("manual");
    s.component = ManualComponent{m.at("type").get<std::string>(), m.value("text", ""),
                                  m.at("relative_location").get<GridCell>()};
  } else {
    throw ValidationError("component", "either 'component' or 'manual' is required");
  }
  return s;
}

void to_json(Json& j, const ReportDraft& d) {
  Json steps = Json::array();
  for (const auto& s : d.steps) steps.push_back(s);
  j = Json{{"format", "reprokit-draft/1"},
           {"draft_id", d.draft_id},
           {"app_id", d.app_id},
           {"app_version", d.app_version},
           {"header", d.header},
           {"steps", std::move(steps)},
           {"belief", d.belief},
           {"finalized_as", opt_json(d.finalized_as)}};
}

ReportDraft draft_from_json(const Json& j) {
  ReportDraft d;
  d.draft_id = j.at("draft_id").get<std::string>();
  d.app_id = j.at("app_id").get<std::string>();
  d.app_version = j.at("app_version").get<std::string>();
  d.header = j.at("header").get<ReportHeader>();
  for (const auto& s : j.at("steps")) d.steps.push_back(step_from_json(s));
  d.belief = j.at("belief").get<BeliefState>();
  d.finalized_as = opt_string(j, "finalized_as");
  return d;
}

void to_json(Json& j, const ReportStep& s) {
  j = Json{{"step_num", s.step_num},
           {"action", s.action},
           {"component_type", s.component_type},
           {"component_text", opt_json(s.component_text)},
           {"relative_location", s.relative_location},
           {"activity", s.activity_name},
           {"source_units", s.source_units},
           {"crop", opt_json(s.crop_address)},
           {"full_shot", opt_json(s.full_shot)},
           {"component_key", s.component_key ? Json(*s.component_key) : Json()},
           {"state", s.state ? Json(*s.state) : Json()},
           {"manual", s.manual},
           {"notes", s.notes}};
}

ReportStep report_step_from_json(const Json& j) {
  ReportStep s;
  s.step_num = j.at("step_num").get<int>();
  s.action = action_from_json(j.at("action"));
  s.component_type = j.at("component_type").get<std::string>();
  s.component_text = opt_string(j, "component_text");
  s.relative_location = j.at("relative_location").get<GridCell>();
  s.activity_name = j.at("activity").get<std::string>();
  s.source_units = j.at("source_units").get<std::vector<std::string>>();
  s.crop_address = opt_string(j, "crop");
  s.full_shot = opt_string(j, "full_shot");
  if (j.contains("component_key") && !j.at("component_key").is_null()) {
    s.component_key = j.at("component_key").get<ComponentKey>();
  }
  if (j.contains("state") && !j.at("state").is_null()) {
    s.state = j.at("state").get<StateFingerprint>();
  }
  s.manual = j.at("manual").get<bool>();
  s.notes = j.value("notes", "");
  return s;
}

void to_json(Json& j, const BugReport& r) {
  Json steps = Json::array();
  for (const auto& s : r.steps) steps.push_back(s);
  j = Json{{"format", "reprokit-report/1"},
           {"report_id", r.report_id},
           {"app_id", r.app_id},
           {"app_version", r.app_version},
           {"draft_id", r.draft_id},
           {"header", r.header},
           {"steps", std::move(steps)},
           {"full_shots", r.full_shots},
           {"created_at", r.created_at}};
}

BugReport report_from_json(const Json& j) {
  BugReport r;
  r.report_id = j.at("report_id").get<std::string>();
  r.app_id = j.at("app_id").get<std::string>();
  r.app_version = j.at("app_version").get<std::string>();
  r.draft_id = j.value("draft_id", "");
  r.header = j.at("header").get<ReportHeader>();
  for (const auto& s : j.at("steps")) r.steps.push_back(report_step_from_json(s));
  r.full_shots = j.at("full_shots").get<std::vector<std::string>>();
  r.created_at = j.at("created_at").get<std::string>();
  return r;
}

void to_json(Json& j, const ReplayScript& s) {
  Json entries = Json::array();
  for (const auto& e : s.entries) {
    entries.push_back(Json{{"action", e.action},
                           {"component", e.component},
                           {"expected_after", e.expected_after},
                           {"external", e.external}});
  }
  j = Json{{"format", "reprokit-script/1"},
           {"app_id", s.app_id},
           {"app_version", s.app_version},
           {"entries", std::move(entries)},
           {"expected_final", s.expected_final}};
}

std::string serialize_draft(const ReportDraft& draft) { return to_document(Json(draft)); }

ReportDraft parse_draft(std::string_view text, const std::string& origin) {
  try {
    return draft_from_json(parse_document(text, origin));
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::parse_error, origin + ": " + e.what());
  }
}

}  // namespace reprokit
