#pragma once

// JSON mapping for drafts, reports and steps (store documents and API payloads).

#include "reprokit/reporting.hpp"
#include "reprokit/serialize.hpp"
#include "reprokit/suggestion.hpp"

namespace reprokit {

void to_json(Json& j, const BeliefState& b);
void from_json(const Json& j, BeliefState& b);
void to_json(Json& j, const ReportHeader& h);
void from_json(const Json& j, ReportHeader& h);
void to_json(Json& j, const ReproStep& s);
ReproStep step_from_json(const Json& j);
void to_json(Json& j, const ReportDraft& d);
ReportDraft draft_from_json(const Json& j);
void to_json(Json& j, const ReportStep& s);
ReportStep report_step_from_json(const Json& j);
void to_json(Json& j, const BugReport& r);
BugReport report_from_json(const Json& j);
void to_json(Json& j, const ReplayScript& s);

std::string serialize_draft(const ReportDraft& draft);
ReportDraft parse_draft(std::string_view text, const std::string& origin = "draft");

}  // namespace reprokit
