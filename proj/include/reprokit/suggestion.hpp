#pragma once

// Step-wise auto-completion over a ripped EventFlowGraph.
//
// The engine tracks where the reporter can be in the event flow as a belief:
// a set of candidate states, or ALL_KNOWN once the model has lost track. The
// belief is a pure fold over the recorded steps, so drafts never need to store
// anything the steps do not already determine.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "reprokit/model.hpp"
#include "reprokit/primer.hpp"
#include "reprokit/screenshot.hpp"

namespace reprokit {

struct BeliefState {
  enum class Mode {
    cold_start,  // before any step: exactly the main state
    tracked,     // after confirmed steps
    all_known,   // model gap; every known state is possible
  };

  Mode mode = Mode::cold_start;
  std::vector<StateFingerprint> candidates;  // discovery order; empty if all_known

  bool all_known() const noexcept { return mode == Mode::all_known; }
  static BeliefState everything() { return BeliefState{Mode::all_known, {}}; }

  bool operator==(const BeliefState&) const = default;
};

/// A component picked from the suggestion list and confirmed on a full
/// screenshot of `state`.
struct ResolvedComponent {
  ComponentKey key;
  StateFingerprint state;
  std::string shot;  // address of the confirming augmented screenshot

  bool operator==(const ResolvedComponent&) const = default;
};

/// The "Not in this list..." path.
struct ManualComponent {
  std::string component_type;
  std::string text;
  GridCell relative_location;

  bool operator==(const ManualComponent&) const = default;
};

struct ReproStep {
  int step_num = 1;
  Action action = Action::click();
  std::variant<ResolvedComponent, ManualComponent> component;
  std::string activity_name;
  std::string notes;

  bool manual() const noexcept {
    return std::holds_alternative<ManualComponent>(component);
  }
  const ResolvedComponent* resolved() const noexcept {
    return std::get_if<ResolvedComponent>(&component);
  }

  bool operator==(const ReproStep&) const = default;
};

enum class Orientation { portrait, landscape };

std::string_view to_string(Orientation o) noexcept;
std::optional<Orientation> parse_orientation(std::string_view text);

struct ReportHeader {
  std::string reporter_name;
  std::string device;
  Orientation orientation = Orientation::portrait;
  std::string title;
  std::string description;

  bool operator==(const ReportHeader&) const = default;
};

struct ReportDraft {
  std::string draft_id;
  std::string app_id;
  std::string app_version;
  ReportHeader header;
  std::vector<ReproStep> steps;
  BeliefState belief;
  std::optional<std::string> finalized_as;  // report id once finalized

  bool operator==(const ReportDraft&) const = default;
};

struct CandidateComponent {
  ComponentDescriptor descriptor;
  std::string label;
  ScreenshotDoc crop;
  std::vector<StateFingerprint> states;  // origin states, discovery order

  std::string crop_address() const { return crop.address; }
};

struct CandidateShot {
  StateFingerprint state;
  AugmentedShot shot;
};

/// Throws Error(precondition) for a graph without states.
BeliefState initial_belief(const EventFlowGraph& graph);

/// Union of supported actions over the states in play, in canonical order.
std::vector<ActionKind> suggest_actions(const EventFlowGraph& graph,
                                        const BeliefState& belief);

/// States whose components are offered for the belief: the cold-start state
/// alone, candidates plus their one-transition successors once tracking, or
/// every state in ALL_KNOWN mode. Discovery order.
std::vector<StateFingerprint> states_in_play(const EventFlowGraph& graph,
                                             const BeliefState& belief);

std::vector<CandidateComponent> suggest_components(const EventFlowGraph& graph,
                                                   const BeliefState& belief,
                                                   ActionKind action);

/// Full augmented screenshots of every in-play state holding the component,
/// preferring belief candidates over lookahead states. Throws
/// Error(stale_suggestion) when no such state exists.
std::vector<CandidateShot> candidate_screenshots(const EventFlowGraph& graph,
                                                 const BeliefState& belief,
                                                 ActionKind action,
                                                 const ComponentKey& key);

/// Belief after one step, without staleness checks.
BeliefState advance_belief(const EventFlowGraph& graph, const BeliefState& belief,
                           const ReproStep& step);

/// Belief after folding every step from cold start.
BeliefState fold_belief(const EventFlowGraph& graph, const std::vector<ReproStep>& steps);

/// Appends a step. Throws Error(sequencing) for a wrong step number and
/// Error(stale_suggestion) when a resolved component was not offered.
ReportDraft record_step(const EventFlowGraph& graph, ReportDraft draft, ReproStep step);

/// Removes a step, renumbers the rest and refolds the belief. Throws
/// Error(not_found) for unknown step numbers.
ReportDraft delete_step(const EventFlowGraph& graph, ReportDraft draft, int step_num);

std::vector<std::string> manual_entry_vocabulary(const StaticAppModel& model);

}  // namespace reprokit
