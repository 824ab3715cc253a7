#pragma once

// JSON mapping for the core model. Every persisted document goes through
// to_document(), which fixes key order, indentation and the trailing newline so
// the same value always produces the same bytes.

#include <string>
#include <string_view>

#include <json.hpp>

#include "reprokit/model.hpp"

namespace reprokit {

using Json = nlohmann::json;

std::string to_document(const Json& value);
/// Throws ParseError(file, line) on malformed text.
Json parse_document(std::string_view text, const std::string& origin);

std::string sha256_hex(std::string_view bytes);

void to_json(Json& j, const Rect& r);
void from_json(const Json& j, Rect& r);
void to_json(Json& j, const ScreenDims& d);
void from_json(const Json& j, ScreenDims& d);
void to_json(Json& j, const GridCell& c);
void from_json(const Json& j, GridCell& c);
void to_json(Json& j, const ActionSet& s);
void from_json(const Json& j, ActionSet& s);
void to_json(Json& j, const Action& a);
Action action_from_json(const Json& j);
void to_json(Json& j, const ComponentKey& k);
void from_json(const Json& j, ComponentKey& k);
void to_json(Json& j, const ComponentDescriptor& c);
void from_json(const Json& j, ComponentDescriptor& c);
void to_json(Json& j, const StateFingerprint& f);
void from_json(const Json& j, StateFingerprint& f);
void to_json(Json& j, const ScreenState& s);
void from_json(const Json& j, ScreenState& s);
void to_json(Json& j, const Transition& t);
Transition transition_from_json(const Json& j);
void to_json(Json& j, const ActionSite& a);
void from_json(const Json& j, ActionSite& a);
void to_json(Json& j, const EventFlowGraph& g);
void from_json(const Json& j, EventFlowGraph& g);

std::string serialize_graph(const EventFlowGraph& graph);
EventFlowGraph parse_graph(std::string_view text,
                           const std::string& origin = "graph.efg");

}  // namespace reprokit
