#include "reprokit/model.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <tuple>

#include "reprokit/error.hpp"
#include "reprokit/serialize.hpp"

namespace reprokit {

std::string_view to_string(ActionKind kind) noexcept {
  switch (kind) {
    case ActionKind::click: return "click";
    case ActionKind::long_click: return "long-click";
    case ActionKind::type: return "type";
    case ActionKind::swipe: return "swipe";
  }
  return "click";
}

std::optional<ActionKind> parse_action_kind(std::string_view text) {
  for (auto k : kAllActionKinds) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

std::string_view to_string(SwipeDirection dir) noexcept {
  switch (dir) {
    case SwipeDirection::up: return "up";
    case SwipeDirection::down: return "down";
    case SwipeDirection::left: return "left";
    case SwipeDirection::right: return "right";
  }
  return "up";
}

std::optional<SwipeDirection> parse_swipe_direction(std::string_view text) {
  for (auto d : {SwipeDirection::up, SwipeDirection::down, SwipeDirection::left,
                 SwipeDirection::right}) {
    if (to_string(d) == text) return d;
  }
  return std::nullopt;
}

std::vector<ActionKind> ActionSet::kinds() const {
  std::vector<ActionKind> out;
  for (auto k : kAllActionKinds) {
    if (contains(k)) out.push_back(k);
  }
  return out;
}

Action Action::make(ActionKind kind, std::optional<std::string> typed_text,
                    std::optional<SwipeDirection> direction) {
  const bool wants_text = kind == ActionKind::type;
  const bool wants_dir = kind == ActionKind::swipe;
  if (wants_text != typed_text.has_value()) {
    throw Error(ErrorKind::invalid_action,
                wants_text ? "type action requires typed text"
                           : "typed text only allowed on type actions");
  }
  if (wants_dir != direction.has_value()) {
    throw Error(ErrorKind::invalid_action,
                wants_dir ? "swipe action requires a direction"
                          : "direction only allowed on swipe actions");
  }
  return Action(kind, std::move(typed_text), direction);
}

std::string describe(const Action& action) {
  std::string out{to_string(action.kind())};
  if (action.typed_text()) out += " \"" + *action.typed_text() + "\"";
  if (action.swipe_direction()) {
    out += ' ';
    out += to_string(*action.swipe_direction());
  }
  return out;
}

std::string to_string(const ComponentKey& key) {
  return key.activity + "/" + key.resource_id + "#" +
         std::to_string(key.object_index);
}

std::optional<ComponentKey> parse_component_key(std::string_view text) {
  const auto slash = text.find('/');
  const auto hash = text.rfind('#');
  if (slash == std::string_view::npos || hash == std::string_view::npos ||
      hash < slash || slash == 0 || hash == slash + 1) {
    return std::nullopt;
  }
  int index = 0;
  const auto digits = text.substr(hash + 1);
  auto [ptr, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), index);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || index < 1) {
    return std::nullopt;
  }
  return ComponentKey{std::string(text.substr(0, slash)),
                      std::string(text.substr(slash + 1, hash - slash - 1)),
                      index};
}

void assign_object_indices(std::vector<ComponentDescriptor>& components) {
  std::map<std::pair<std::string, std::optional<std::string>>, int> seen;
  for (auto& c : components) {
    c.object_index = ++seen[{c.component_type, c.text}];
  }
}

void assign_relative_locations(std::vector<ComponentDescriptor>& components,
                               const ScreenDims& dims) {
  for (auto& c : components) c.relative_location = grid_cell(c.bounds, dims);
}

const ComponentDescriptor* ScreenState::find(const ComponentKey& key) const {
  for (const auto& c : components) {
    if (c.object_index == key.object_index &&
        c.resource_id == key.resource_id && c.activity_name == key.activity) {
      return &c;
    }
  }
  return nullptr;
}

std::string canonical_bytes(const ScreenState& state) {
  std::vector<const ComponentDescriptor*> sorted;
  sorted.reserve(state.components.size());
  for (const auto& c : state.components) sorted.push_back(&c);
  std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
    return std::tie(a->activity_name, a->window_id, a->resource_id,
                    a->object_index) < std::tie(b->activity_name, b->window_id,
                                                b->resource_id, b->object_index);
  });
  Json comps = Json::array();
  for (const auto* c : sorted) {
    comps.push_back(Json{{"activity", c->activity_name},
                         {"window", c->window_id},
                         {"id", c->resource_id},
                         {"index", c->object_index},
                         {"type", c->component_type},
                         {"text", c->text ? Json(*c->text) : Json()},
                         {"bounds", c->bounds},
                         {"actions", c->supported_actions}});
  }
  const Json doc{{"activity", state.activity_name},
                 {"window", state.window_id},
                 {"dims", state.screen_dims},
                 {"components", std::move(comps)}};
  return doc.dump();
}

StateFingerprint fingerprint(const ScreenState& state) {
  return StateFingerprint{sha256_hex(canonical_bytes(state))};
}

bool EventFlowGraph::add_state(ScreenState state) {
  if (index_.contains(state.fingerprint.digest)) return false;
  index_.emplace(state.fingerprint.digest, states_.size());
  states_.push_back(std::move(state));
  return true;
}

const ScreenState* EventFlowGraph::find_state(const StateFingerprint& fp) const {
  auto it = index_.find(fp.digest);
  return it == index_.end() ? nullptr : &states_[it->second];
}

std::size_t EventFlowGraph::discovery_index(const StateFingerprint& fp) const {
  auto it = index_.find(fp.digest);
  return it == index_.end() ? npos : it->second;
}

std::vector<const Transition*> EventFlowGraph::transitions_from(
    const StateFingerprint& fp) const {
  std::vector<const Transition*> out;
  for (const auto& t : transitions) {
    if (t.from == fp) out.push_back(&t);
  }
  return out;
}

bool EventFlowGraph::operator==(const EventFlowGraph& other) const {
  return app_id == other.app_id && app_version == other.app_version &&
         main_state == other.main_state && transitions == other.transitions &&
         unexplored == other.unexplored && exits == other.exits &&
         complete == other.complete && states_ == other.states_;
}

}  // namespace reprokit
