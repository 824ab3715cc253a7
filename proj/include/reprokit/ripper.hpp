#pragma once

// Dynamic analysis: a depth-first, click-only exploration of a running app
// through the DeviceDriver contract, producing an EventFlowGraph.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "reprokit/error.hpp"
#include "reprokit/model.hpp"
#include "reprokit/primer.hpp"

namespace reprokit {

enum class OutcomeKind { in_app, external, app_exited };

std::string_view to_string(OutcomeKind kind) noexcept;

struct PerformOutcome {
  OutcomeKind kind = OutcomeKind::in_app;
};

/// Device automation contract. Implementations are stateful and not
/// thread-safe; one exploration session owns a driver exclusively.
class DeviceDriver {
 public:
  virtual ~DeviceDriver() = default;

  virtual void launch_app(bool cold) = 0;
  /// The visible screen, without fingerprint or screenshot. Throws
  /// Error(driver_failure) when the app is not in the foreground.
  virtual ScreenState current_screen() = 0;
  /// Throws Error(driver_failure) for components not on the current screen.
  virtual PerformOutcome perform(const Action& action, const ComponentKey& key) = 0;
  virtual void press_back() = 0;
  virtual bool at_home() = 0;
};

// ---------------------------------------------------------------------------
// Behavior model (behavior.model file)
// ---------------------------------------------------------------------------
//
//   behavior-model 1
//   initial <state>
//   state <state> activity=<A> window=<W> [layout=<A>/<W>] [hide=<id>,...]
//   text <state> <id> <replacement text...>
//   on <state> <id> <action-kind> -> <state> | EXTERNAL | EXIT_TO_HOME
//
// Lines starting with '#' and blank lines are ignored.

inline constexpr std::string_view kExternalTarget = "EXTERNAL";
inline constexpr std::string_view kExitTarget = "EXIT_TO_HOME";

struct BehaviorState {
  std::string id;
  std::string activity;
  std::string window;
  std::string layout_activity;  // layout source; defaults to activity/window
  std::string layout_window;
  std::vector<std::string> hidden;
  std::map<std::string, std::string> text_overrides;
};

struct BehaviorKey {
  std::string state;
  std::string resource_id;
  ActionKind action = ActionKind::click;

  auto operator<=>(const BehaviorKey&) const = default;
};

struct BehaviorModel {
  std::string initial;
  std::vector<BehaviorState> states;  // declaration order
  std::map<BehaviorKey, std::string> table;

  const BehaviorState* find(const std::string& id) const;
};

/// Throws ParseError on syntax errors and Error(model_malformed) on semantic
/// ones (undefined states, duplicate keys).
BehaviorModel parse_behavior_model(std::string_view text,
                                   const std::string& origin = "behavior.model");
std::string serialize_behavior_model(const BehaviorModel& model);

/// Driver over a BehaviorModel whose screens are rendered from the bundle's
/// layouts. Records every call in a log (see call_log()).
class SimulatedDevice final : public DeviceDriver {
 public:
  /// Throws Error(model_malformed) when the model references undeclared
  /// layouts or components.
  SimulatedDevice(const AppBundle& bundle, BehaviorModel model);

  void launch_app(bool cold) override;
  ScreenState current_screen() override;
  PerformOutcome perform(const Action& action, const ComponentKey& key) override;
  void press_back() override;
  bool at_home() override;

  /// Screen for a behavior state, independent of the device position.
  ScreenState screen_of(const std::string& state_id) const;
  const BehaviorModel& model() const noexcept { return model_; }
  const std::optional<std::string>& current_state() const noexcept {
    return current_;
  }

  /// One line per call: "launch cold|warm", "screen", "perform <action> <key>
  /// -> <outcome>", "back", "at_home".
  const std::vector<std::string>& call_log() const noexcept { return log_; }
  void clear_log() { log_.clear(); }

 private:
  const AppBundle* bundle_;
  BehaviorModel model_;
  std::map<std::string, ScreenState> screens_;
  std::optional<std::string> current_;
  std::optional<std::string> suspended_;  // in-app state under an external app
  std::vector<std::string> log_;
};

/// Builds a simulated device for a bundle. The returned driver keeps a
/// pointer to `bundle`, which must outlive it.
std::unique_ptr<SimulatedDevice> simulate(const AppBundle& bundle);

// ---------------------------------------------------------------------------
// Ripping
// ---------------------------------------------------------------------------

struct RipConfig {
  int max_depth = 20;
  int max_steps = 10'000;
};

struct RipResult {
  EventFlowGraph graph;
  std::map<std::string, std::string> shots;  // content address -> SVG bytes
  std::size_t steps = 0;
};

/// Raised when the driver fails mid-exploration; carries everything built so far.
class RipError : public Error {
 public:
  RipError(const std::string& message, RipResult partial)
      : Error(ErrorKind::partial_graph, message), partial_(std::move(partial)) {}

  const RipResult& partial() const noexcept { return partial_; }

 private:
  RipResult partial_;
};

RipResult rip(DeviceDriver& driver, const StaticAppModel& static_model,
              const RipConfig& config = {});

struct ActivityCoverage {
  std::size_t visited = 0;
  std::size_t total = 0;

  bool operator==(const ActivityCoverage&) const = default;
};

/// Throws Error(precondition) when the static model has no activities.
ActivityCoverage activity_coverage(const EventFlowGraph& graph,
                                   const StaticAppModel& static_model);

std::string format_coverage(const ActivityCoverage& coverage);

}  // namespace reprokit
