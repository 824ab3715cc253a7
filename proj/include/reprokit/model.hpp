#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "reprokit/geometry.hpp"

namespace reprokit {

enum class ActionKind { click, long_click, type, swipe };
enum class SwipeDirection { up, down, left, right };

std::string_view to_string(ActionKind kind) noexcept;
std::optional<ActionKind> parse_action_kind(std::string_view text);
std::string_view to_string(SwipeDirection dir) noexcept;
std::optional<SwipeDirection> parse_swipe_direction(std::string_view text);

/// Every action kind in canonical suggestion order.
inline constexpr ActionKind kAllActionKinds[] = {
    ActionKind::click, ActionKind::long_click, ActionKind::type,
    ActionKind::swipe};

/// Set of action kinds stored as a bitmask in canonical order.
class ActionSet {
 public:
  ActionSet() = default;
  ActionSet(std::initializer_list<ActionKind> kinds) {
    for (auto k : kinds) insert(k);
  }

  void insert(ActionKind k) noexcept { bits_ |= bit(k); }
  bool contains(ActionKind k) const noexcept { return (bits_ & bit(k)) != 0; }
  bool empty() const noexcept { return bits_ == 0; }
  ActionSet& operator|=(ActionSet other) noexcept {
    bits_ |= other.bits_;
    return *this;
  }
  std::vector<ActionKind> kinds() const;

  bool operator==(const ActionSet&) const = default;

 private:
  static unsigned bit(ActionKind k) noexcept {
    return 1u << static_cast<unsigned>(k);
  }
  unsigned bits_ = 0;
};

/// A gesture. Payloads are present exactly when the kind requires them; use the
/// factories, which enforce that.
class Action {
 public:
  static Action click() { return Action(ActionKind::click, {}, {}); }
  static Action long_click() { return Action(ActionKind::long_click, {}, {}); }
  static Action type(std::string text) {
    return Action(ActionKind::type, std::move(text), {});
  }
  static Action swipe(SwipeDirection dir) {
    return Action(ActionKind::swipe, {}, dir);
  }
  /// Builds from loose parts, throwing Error(invalid_action) when payloads do
  /// not match the kind.
  static Action make(ActionKind kind, std::optional<std::string> typed_text,
                     std::optional<SwipeDirection> direction);

  ActionKind kind() const noexcept { return kind_; }
  const std::optional<std::string>& typed_text() const noexcept {
    return typed_text_;
  }
  const std::optional<SwipeDirection>& swipe_direction() const noexcept {
    return direction_;
  }

  bool operator==(const Action&) const = default;

 private:
  Action(ActionKind kind, std::optional<std::string> text,
         std::optional<SwipeDirection> dir)
      : kind_(kind), typed_text_(std::move(text)), direction_(dir) {}

  ActionKind kind_;
  std::optional<std::string> typed_text_;
  std::optional<SwipeDirection> direction_;
};

std::string describe(const Action& action);

/// Identity of a component: (activity, resource id, object index).
struct ComponentKey {
  std::string activity;
  std::string resource_id;
  int object_index = 1;

  auto operator<=>(const ComponentKey&) const = default;
};

/// Renders as "Activity/resource_id#index".
std::string to_string(const ComponentKey& key);
std::optional<ComponentKey> parse_component_key(std::string_view text);

struct ComponentDescriptor {
  std::string activity_name;
  std::string window_id;
  std::string resource_id;
  int object_index = 1;
  std::string component_type;
  std::optional<std::string> text;
  Rect bounds;
  GridCell relative_location;
  ActionSet supported_actions;
  std::vector<std::string> source_units;

  ComponentKey key() const {
    return ComponentKey{activity_name, resource_id, object_index};
  }

  bool operator==(const ComponentDescriptor&) const = default;
};

/// Assigns 1-based object indices per (component_type, text) group in
/// document order.
void assign_object_indices(std::vector<ComponentDescriptor>& components);

/// Recomputes every component's relative_location from its bounds.
void assign_relative_locations(std::vector<ComponentDescriptor>& components,
                               const ScreenDims& dims);

struct StateFingerprint {
  std::string digest;  // lowercase hex

  bool empty() const noexcept { return digest.empty(); }
  auto operator<=>(const StateFingerprint&) const = default;
};

struct ScreenState {
  std::string activity_name;
  std::string window_id;
  ScreenDims screen_dims;
  std::vector<ComponentDescriptor> components;
  StateFingerprint fingerprint;
  std::optional<std::string> screenshot_ref;

  const ComponentDescriptor* find(const ComponentKey& key) const;

  bool operator==(const ScreenState&) const = default;
};

/// Canonical byte serialization used for fingerprinting: components sorted by
/// (activity, window, resource_id, object_index); fingerprint, screenshot_ref
/// and source_units are excluded.
std::string canonical_bytes(const ScreenState& state);

StateFingerprint fingerprint(const ScreenState& state);

struct Transition {
  StateFingerprint from;
  Action action = Action::click();
  ComponentKey component;
  StateFingerprint to;
  std::string before_shot;
  std::string after_shot;
  bool external = false;

  bool operator==(const Transition&) const = default;
};

/// An action seen but not fired, or fired and found to leave the app.
struct ActionSite {
  StateFingerprint state;
  ComponentKey component;
  ActionKind action = ActionKind::click;

  bool operator==(const ActionSite&) const = default;
};

/// The ripped app execution model. States are kept in discovery order.
class EventFlowGraph {
 public:
  std::string app_id;
  std::string app_version;
  StateFingerprint main_state;
  std::vector<Transition> transitions;
  std::vector<ActionSite> unexplored;
  std::vector<ActionSite> exits;
  bool complete = true;

  const std::vector<ScreenState>& states() const noexcept { return states_; }

  /// Adds a state unless its fingerprint is already present. Returns true if
  /// it was new.
  bool add_state(ScreenState state);
  const ScreenState* find_state(const StateFingerprint& fp) const;
  bool contains(const StateFingerprint& fp) const {
    return find_state(fp) != nullptr;
  }
  /// Position of the state in discovery order; npos if absent.
  std::size_t discovery_index(const StateFingerprint& fp) const;

  std::vector<const Transition*> transitions_from(
      const StateFingerprint& fp) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  bool operator==(const EventFlowGraph& other) const;

 private:
  std::vector<ScreenState> states_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace reprokit
