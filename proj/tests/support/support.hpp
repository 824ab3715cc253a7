#pragma once

// Shared test fixtures: temporary directories, a random app-bundle generator,
// and oracles that work straight from the behavior model without going
// through the ripper or the suggestion engine.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "reprokit/primer.hpp"
#include "reprokit/ripper.hpp"
#include "reprokit/store.hpp"
#include "reprokit/suggestion.hpp"

namespace testsupport {

namespace fs = std::filesystem;

fs::path fixtures_dir();
fs::path minidoc_dir();
fs::path coverage_fixture_dir();
fs::path cli_path();

class TempDir {
 public:
  explicit TempDir(const std::string& prefix = "reprokit-test");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const noexcept { return path_; }
  fs::path operator/(const std::string& child) const { return path_ / child; }

 private:
  fs::path path_;
};

void write_text(const fs::path& path, std::string_view text);
std::string read_text(const fs::path& path);

/// Copies a bundle directory, optionally replacing its behavior.model.
void copy_bundle(const fs::path& from, const fs::path& to,
                 const std::string* behavior_override = nullptr);

struct GeneratorLimits {
  int max_activities = 8;
  int max_windows_per_activity = 2;
  int max_components = 6;
  double external_rate = 0.08;
  double exit_rate = 0.05;
};

/// Writes a random, deterministic (for a seed) bundle to `dir`. Every behavior
/// state gets its own (activity, window) pair so screens are distinct.
void generate_bundle(const fs::path& dir, std::uint32_t seed,
                     const GeneratorLimits& limits = {});

/// Fingerprints of all states reachable from cold start by clicks, computed
/// by breadth-first search over the behavior model.
std::set<std::string> click_reachable_fingerprints(const reprokit::SimulatedDevice& device);

/// One ground-truth step: the state the user is in and what they clicked.
struct TrueStep {
  std::string state_id;
  reprokit::ComponentKey component;
};

/// A random click walk from the initial state that never leaves the app.
std::vector<TrueStep> sample_click_trace(const reprokit::SimulatedDevice& device,
                                         std::mt19937& rng, int max_len);

/// Behavior state after clicking `component` in `state_id`.
std::string next_state(const reprokit::BehaviorModel& model, const std::string& state_id,
                       const reprokit::ComponentKey& component);

/// A bundle loaded, simulated and fully ripped.
struct RippedApp {
  reprokit::AppBundle bundle;
  std::unique_ptr<reprokit::SimulatedDevice> device;
  reprokit::StaticAppModel model;
  reprokit::RipResult result;

  const reprokit::EventFlowGraph& graph() const { return result.graph; }
  /// Fingerprint of a behavior state's screen.
  reprokit::StateFingerprint fp(const std::string& state_id) const;
};

std::unique_ptr<RippedApp> rip_bundle(const fs::path& dir);

/// Persists what `analyze` would for an already ripped app.
void install_app(reprokit::Store& store, const RippedApp& app);

/// What a reporter does after picking a suggested component: confirms it on
/// one of the candidate screenshots. Picks the shot for `true_state` when
/// given, else the first one.
reprokit::ReproStep confirm_step(const reprokit::EventFlowGraph& graph,
                                 const reprokit::BeliefState& belief, int step_num,
                                 const reprokit::Action& action,
                                 const reprokit::ComponentKey& key,
                                 const reprokit::StateFingerprint* true_state = nullptr);

reprokit::ReportDraft empty_draft(const reprokit::EventFlowGraph& graph,
                                  const std::string& title = "Crash on open");

}  // namespace testsupport
