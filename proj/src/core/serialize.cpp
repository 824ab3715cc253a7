#include "reprokit/serialize.hpp"

#include <openssl/evp.h>

#include <array>
#include <memory>

#include "reprokit/error.hpp"

namespace reprokit {

std::string to_document(const Json& value) { return value.dump(2) + "\n"; }

Json parse_document(std::string_view text, const std::string& origin) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    // nlohmann reports a byte offset; convert it to a line number.
    long line = 1;
    const auto limit = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i < limit; ++i)
      if (text[i] == '\n') ++line;
    throw ParseError(origin, line, e.what());
  }
}

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              &EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1) {
    throw Error(ErrorKind::io_error, "sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xf]);
  }
  return out;
}

namespace {

template <typename T>
T required(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorKind::parse_error, std::string("missing field '") + key + "'");
  }
  return j.at(key).get<T>();
}

std::optional<std::string> optional_string(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::string>();
}

}  // namespace

void to_json(Json& j, const Rect& r) {
  j = Json::array({r.left, r.top, r.right, r.bottom});
}
void from_json(const Json& j, Rect& r) {
  if (!j.is_array() || j.size() != 4) {
    throw Error(ErrorKind::parse_error, "bounds must be [left, top, right, bottom]");
  }
  r = Rect{j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
}

void to_json(Json& j, const ScreenDims& d) {
  j = Json{{"width", d.width}, {"height", d.height}};
}
void from_json(const Json& j, ScreenDims& d) {
  d.width = required<int>(j, "width");
  d.height = required<int>(j, "height");
}

void to_json(Json& j, const GridCell& c) { j = to_string(c); }
void from_json(const Json& j, GridCell& c) {
  auto parsed = parse_grid_cell(j.get<std::string>());
  if (!parsed) {
    throw Error(ErrorKind::parse_error,
                "unknown relative location '" + j.get<std::string>() + "'");
  }
  c = *parsed;
}

void to_json(Json& j, const ActionSet& s) {
  j = Json::array();
  for (auto k : s.kinds()) j.push_back(std::string(to_string(k)));
}
void from_json(const Json& j, ActionSet& s) {
  s = ActionSet{};
  for (const auto& item : j) {
    auto k = parse_action_kind(item.get<std::string>());
    if (!k) {
      throw Error(ErrorKind::parse_error,
                  "unknown action '" + item.get<std::string>() + "'");
    }
    s.insert(*k);
  }
}

void to_json(Json& j, const Action& a) {
  j = Json{{"kind", std::string(to_string(a.kind()))}};
  if (a.typed_text()) j["text"] = *a.typed_text();
  if (a.swipe_direction()) {
    j["direction"] = std::string(to_string(*a.swipe_direction()));
  }
}

Action action_from_json(const Json& j) {
  const auto kind_text = required<std::string>(j, "kind");
  auto kind = parse_action_kind(kind_text);
  if (!kind) {
    throw Error(ErrorKind::invalid_action, "unknown action '" + kind_text + "'");
  }
  std::optional<SwipeDirection> dir;
  if (auto d = optional_string(j, "direction")) {
    dir = parse_swipe_direction(*d);
    if (!dir) throw Error(ErrorKind::invalid_action, "unknown direction '" + *d + "'");
  }
  return Action::make(*kind, optional_string(j, "text"), dir);
}

void to_json(Json& j, const ComponentKey& k) { j = to_string(k); }
void from_json(const Json& j, ComponentKey& k) {
  auto parsed = parse_component_key(j.get<std::string>());
  if (!parsed) {
    throw Error(ErrorKind::parse_error,
                "malformed component key '" + j.get<std::string>() + "'");
  }
  k = *parsed;
}

void to_json(Json& j, const ComponentDescriptor& c) {
  j = Json{{"activity", c.activity_name},
           {"window", c.window_id},
           {"id", c.resource_id},
           {"index", c.object_index},
           {"type", c.component_type},
           {"text", c.text ? Json(*c.text) : Json()},
           {"bounds", c.bounds},
           {"location", c.relative_location},
           {"actions", c.supported_actions},
           {"sources", c.source_units}};
}
void from_json(const Json& j, ComponentDescriptor& c) {
  c.activity_name = required<std::string>(j, "activity");
  c.window_id = required<std::string>(j, "window");
  c.resource_id = required<std::string>(j, "id");
  c.object_index = required<int>(j, "index");
  c.component_type = required<std::string>(j, "type");
  c.text = optional_string(j, "text");
  c.bounds = required<Rect>(j, "bounds");
  c.relative_location = required<GridCell>(j, "location");
  c.supported_actions = required<ActionSet>(j, "actions");
  c.source_units = j.value("sources", std::vector<std::string>{});
}

void to_json(Json& j, const StateFingerprint& f) { j = f.digest; }
void from_json(const Json& j, StateFingerprint& f) {
  f.digest = j.get<std::string>();
}

void to_json(Json& j, const ScreenState& s) {
  j = Json{{"activity", s.activity_name},
           {"window", s.window_id},
           {"dims", s.screen_dims},
           {"components", s.components},
           {"fingerprint", s.fingerprint},
           {"screenshot", s.screenshot_ref ? Json(*s.screenshot_ref) : Json()}};
}
void from_json(const Json& j, ScreenState& s) {
  s.activity_name = required<std::string>(j, "activity");
  s.window_id = required<std::string>(j, "window");
  s.screen_dims = required<ScreenDims>(j, "dims");
  s.components = required<std::vector<ComponentDescriptor>>(j, "components");
  s.fingerprint = required<StateFingerprint>(j, "fingerprint");
  s.screenshot_ref = optional_string(j, "screenshot");
}

void to_json(Json& j, const Transition& t) {
  j = Json{{"from", t.from},         {"action", t.action},
           {"component", t.component}, {"to", t.to},
           {"before", t.before_shot},  {"after", t.after_shot},
           {"external", t.external}};
}
Transition transition_from_json(const Json& j) {
  Transition t;
  t.from = required<StateFingerprint>(j, "from");
  t.action = action_from_json(j.at("action"));
  t.component = required<ComponentKey>(j, "component");
  t.to = required<StateFingerprint>(j, "to");
  t.before_shot = required<std::string>(j, "before");
  t.after_shot = required<std::string>(j, "after");
  t.external = required<bool>(j, "external");
  return t;
}

void to_json(Json& j, const ActionSite& a) {
  j = Json{{"state", a.state},
           {"component", a.component},
           {"action", std::string(to_string(a.action))}};
}
void from_json(const Json& j, ActionSite& a) {
  a.state = required<StateFingerprint>(j, "state");
  a.component = required<ComponentKey>(j, "component");
  auto k = parse_action_kind(required<std::string>(j, "action"));
  if (!k) throw Error(ErrorKind::parse_error, "unknown action in action site");
  a.action = *k;
}

void to_json(Json& j, const EventFlowGraph& g) {
  Json transitions = Json::array();
  for (const auto& t : g.transitions) transitions.push_back(t);
  j = Json{{"format", "reprokit-graph/1"},
           {"app_id", g.app_id},
           {"app_version", g.app_version},
           {"main_state", g.main_state},
           {"complete", g.complete},
           {"states", g.states()},
           {"transitions", std::move(transitions)},
           {"unexplored", g.unexplored},
           {"exits", g.exits}};
}

void from_json(const Json& j, EventFlowGraph& g) {
  g = EventFlowGraph{};
  g.app_id = required<std::string>(j, "app_id");
  g.app_version = required<std::string>(j, "app_version");
  g.main_state = required<StateFingerprint>(j, "main_state");
  g.complete = j.value("complete", true);
  for (const auto& s : j.at("states")) {
    if (!g.add_state(s.get<ScreenState>())) {
      throw Error(ErrorKind::parse_error, "duplicate state in graph document");
    }
  }
  for (const auto& t : j.at("transitions")) {
    g.transitions.push_back(transition_from_json(t));
  }
  g.unexplored = j.value("unexplored", std::vector<ActionSite>{});
  g.exits = j.value("exits", std::vector<ActionSite>{});
  if (!g.contains(g.main_state)) {
    throw Error(ErrorKind::parse_error, "main_state is not among the graph states");
  }
  for (const auto& t : g.transitions) {
    if (!g.contains(t.from) || !g.contains(t.to)) {
      throw Error(ErrorKind::parse_error, "transition endpoint outside the graph");
    }
  }
}

std::string serialize_graph(const EventFlowGraph& graph) {
  return to_document(Json(graph));
}

EventFlowGraph parse_graph(std::string_view text, const std::string& origin) {
  return parse_document(text, origin).get<EventFlowGraph>();
}

}  // namespace reprokit
