#include <set>

#include "reprokit/ripper.hpp"
#include "reprokit/screenshot.hpp"

namespace reprokit {

namespace {

struct PathEdge {
  ComponentKey component;
  bool external = false;  // a back-press followed the click
};

class Explorer {
 public:
  Explorer(DeviceDriver& driver, const StaticAppModel& static_model,
           const RipConfig& config)
      : driver_(driver), static_model_(static_model), config_(config) {
    result_.graph.app_id = static_model.app_id;
    result_.graph.app_version = static_model.app_version;
  }

  RipResult run() {
    try {
      driver_.launch_app(true);
      auto root = observe();
      result_.graph.main_state = root.fingerprint;
      const auto fp = root.fingerprint;
      result_.graph.add_state(std::move(root));
      explore(fp, {}, 0);
    } catch (const RipError&) {
      throw;
    } catch (const Error& e) {
      throw RipError(std::string("exploration aborted: ") + e.what(), std::move(result_));
    }
    return std::move(result_);
  }

 private:
  ScreenState observe() {
    auto screen = driver_.current_screen();
    for (auto& c : screen.components) {
      if (const auto* known = static_model_.find(c.key())) c.source_units = known->source_units;
    }
    screen.fingerprint = fingerprint(screen);
    auto shot = render_screen(screen);
    screen.screenshot_ref = shot.address;
    result_.shots.emplace(shot.address, std::move(shot.bytes));
    return screen;
  }

  bool budget_left(int depth) const {
    return depth < config_.max_depth &&
           result_.steps < static_cast<std::size_t>(config_.max_steps);
  }

  // Brings the device back to `target` by relaunching and replaying the DFS
  // path from the root when it is anywhere else.
  void restore(const StateFingerprint& target, const std::vector<PathEdge>& path) {
    if (!driver_.at_home() && fingerprint(driver_.current_screen()) == target) return;
    driver_.launch_app(true);
    for (const auto& edge : path) {
      driver_.perform(Action::click(), edge.component);
      if (edge.external) driver_.press_back();
    }
    if (driver_.at_home() || fingerprint(driver_.current_screen()) != target) {
      throw Error(ErrorKind::driver_failure,
                  "replaying the exploration path did not reach state " + target.digest);
    }
  }

  void explore(const StateFingerprint& fp, const std::vector<PathEdge>& path, int depth) {
    // Copy: add_state may reallocate the graph's state vector.
    const ScreenState state = *result_.graph.find_state(fp);
    for (const auto& comp : state.components) {
      if (!comp.supported_actions.contains(ActionKind::click)) continue;
      const auto key = comp.key();
      if (!budget_left(depth)) {
        result_.graph.unexplored.push_back(ActionSite{fp, key, ActionKind::click});
        result_.graph.complete = false;
        continue;
      }

      restore(fp, path);
      const auto outcome = driver_.perform(Action::click(), key);
      ++result_.steps;

      if (outcome.kind == OutcomeKind::app_exited) {
        result_.graph.exits.push_back(ActionSite{fp, key, ActionKind::click});
        driver_.launch_app(true);
        continue;
      }

      const bool external = outcome.kind == OutcomeKind::external;
      if (external) {
        driver_.press_back();
        if (driver_.at_home()) {
          result_.graph.exits.push_back(ActionSite{fp, key, ActionKind::click});
          driver_.launch_app(true);
          continue;
        }
      }

      auto after = observe();
      const auto to = after.fingerprint;
      result_.graph.transitions.push_back(Transition{fp, Action::click(), key, to,
                                                     *state.screenshot_ref,
                                                     *after.screenshot_ref, external});
      if (result_.graph.add_state(std::move(after))) {
        auto next = path;
        next.push_back(PathEdge{key, external});
        explore(to, next, depth + 1);
      }
    }
  }

  DeviceDriver& driver_;
  const StaticAppModel& static_model_;
  RipConfig config_;
  RipResult result_;
};

}  // namespace

RipResult rip(DeviceDriver& driver, const StaticAppModel& static_model,
              const RipConfig& config) {
  if (config.max_depth < 1 || config.max_steps < 1) {
    throw Error(ErrorKind::precondition, "rip budgets must be positive");
  }
  return Explorer(driver, static_model, config).run();
}

ActivityCoverage activity_coverage(const EventFlowGraph& graph,
                                   const StaticAppModel& static_model) {
  if (static_model.activities.empty()) {
    throw Error(ErrorKind::precondition, "static model declares no activities");
  }
  std::set<std::string> visited;
  for (const auto& s : graph.states()) visited.insert(s.activity_name);
  return ActivityCoverage{visited.size(), static_model.activities.size()};
}

std::string format_coverage(const ActivityCoverage& coverage) {
  return std::to_string(coverage.visited) + "/" + std::to_string(coverage.total) +
         " activities";
}

}  // namespace reprokit
