#include <algorithm>

#include "reprokit/ripper.hpp"

namespace reprokit {

std::string_view to_string(OutcomeKind kind) noexcept {
  switch (kind) {
    case OutcomeKind::in_app: return "in_app";
    case OutcomeKind::external: return "external";
    case OutcomeKind::app_exited: return "app_exited";
  }
  return "in_app";
}

namespace {

[[noreturn]] void malformed(const std::string& message) {
  throw Error(ErrorKind::model_malformed, "behavior.model: " + message);
}

[[noreturn]] void driver_failure(const std::string& message) {
  throw Error(ErrorKind::driver_failure, message);
}

ScreenState build_screen(const AppBundle& bundle, const BehaviorState& st) {
  const auto* layout = bundle.find_layout(st.layout_activity, st.layout_window);
  if (!layout) {
    malformed("state '" + st.id + "' uses undeclared layout " + st.layout_activity +
              "/" + st.layout_window);
  }
  auto declares = [&](const std::string& id) {
    return std::any_of(layout->components.begin(), layout->components.end(),
                       [&](const ComponentDescriptor& c) { return c.resource_id == id; });
  };
  for (const auto& id : st.hidden) {
    if (!declares(id)) malformed("state '" + st.id + "' hides unknown component '" + id + "'");
  }
  for (const auto& [id, text] : st.text_overrides) {
    if (!declares(id)) malformed("state '" + st.id + "' overrides unknown component '" + id + "'");
  }

  ScreenState screen;
  screen.activity_name = st.activity;
  screen.window_id = st.window;
  screen.screen_dims = bundle.manifest.device.dims;
  for (const auto& c : layout->components) {
    if (std::find(st.hidden.begin(), st.hidden.end(), c.resource_id) != st.hidden.end()) {
      continue;
    }
    auto copy = c;
    copy.activity_name = st.activity;
    copy.window_id = st.window;
    copy.source_units.clear();
    if (auto it = st.text_overrides.find(c.resource_id); it != st.text_overrides.end()) {
      copy.text = it->second;
    }
    screen.components.push_back(std::move(copy));
  }
  assign_object_indices(screen.components);
  assign_relative_locations(screen.components, screen.screen_dims);
  return screen;
}

}  // namespace

SimulatedDevice::SimulatedDevice(const AppBundle& bundle, BehaviorModel model)
    : bundle_(&bundle), model_(std::move(model)) {
  for (const auto& st : model_.states) screens_.emplace(st.id, build_screen(bundle, st));
  for (const auto& [key, target] : model_.table) {
    const auto& comps = screens_.at(key.state).components;
    const bool present =
        std::any_of(comps.begin(), comps.end(), [&](const ComponentDescriptor& c) {
          return c.resource_id == key.resource_id;
        });
    if (!present) {
      malformed("transition from '" + key.state + "' references undeclared component '" +
                key.resource_id + "'");
    }
  }
}

void SimulatedDevice::launch_app(bool cold) {
  log_.push_back(cold ? "launch cold" : "launch warm");
  if (cold) {
    current_ = model_.initial;
    suspended_.reset();
    return;
  }
  if (suspended_) {
    current_ = suspended_;
    suspended_.reset();
  } else if (!current_) {
    current_ = model_.initial;
  }
}

ScreenState SimulatedDevice::screen_of(const std::string& state_id) const {
  auto it = screens_.find(state_id);
  if (it == screens_.end()) driver_failure("unknown behavior state '" + state_id + "'");
  return it->second;
}

ScreenState SimulatedDevice::current_screen() {
  log_.push_back("screen");
  if (!current_) driver_failure("app is not in the foreground");
  return screens_.at(*current_);
}

PerformOutcome SimulatedDevice::perform(const Action& action, const ComponentKey& key) {
  const std::string entry = "perform " + describe(action) + " " + to_string(key);
  if (!current_) {
    log_.push_back(entry + " -> failure");
    driver_failure("perform while the app is not in the foreground");
  }
  const auto& screen = screens_.at(*current_);
  const auto* comp = screen.find(key);
  if (!comp) {
    log_.push_back(entry + " -> failure");
    driver_failure("component " + to_string(key) + " is not on screen " + *current_);
  }
  if (!comp->supported_actions.contains(action.kind())) {
    log_.push_back(entry + " -> failure");
    driver_failure("component " + to_string(key) + " does not support " +
                   std::string(to_string(action.kind())));
  }

  PerformOutcome outcome;
  auto it = model_.table.find(BehaviorKey{*current_, key.resource_id, action.kind()});
  if (it != model_.table.end()) {
    if (it->second == kExternalTarget) {
      outcome.kind = OutcomeKind::external;
      suspended_ = current_;
      current_.reset();
    } else if (it->second == kExitTarget) {
      outcome.kind = OutcomeKind::app_exited;
      current_.reset();
      suspended_.reset();
    } else {
      current_ = it->second;
    }
  }
  log_.push_back(entry + " -> " + std::string(to_string(outcome.kind)));
  return outcome;
}

void SimulatedDevice::press_back() {
  log_.push_back("back");
  if (suspended_) {
    current_ = suspended_;
    suspended_.reset();
  } else {
    // No back stack is modeled: backing out of any in-app screen leaves the app.
    current_.reset();
  }
}

bool SimulatedDevice::at_home() {
  log_.push_back("at_home");
  return !current_ && !suspended_;
}

std::unique_ptr<SimulatedDevice> simulate(const AppBundle& bundle) {
  if (!bundle.behavior_model) {
    throw Error(ErrorKind::model_malformed, "bundle has no behavior.model");
  }
  return std::make_unique<SimulatedDevice>(
      bundle, parse_behavior_model(*bundle.behavior_model));
}

}  // namespace reprokit
