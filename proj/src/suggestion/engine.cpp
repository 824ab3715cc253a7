#include <algorithm>
#include <map>

#include "reprokit/error.hpp"
#include "reprokit/suggestion.hpp"

namespace reprokit {

std::string_view to_string(Orientation o) noexcept {
  return o == Orientation::landscape ? "landscape" : "portrait";
}

std::optional<Orientation> parse_orientation(std::string_view text) {
  if (text == "portrait") return Orientation::portrait;
  if (text == "landscape") return Orientation::landscape;
  return std::nullopt;
}

namespace {

void sort_by_discovery(const EventFlowGraph& graph, std::vector<StateFingerprint>& fps) {
  std::sort(fps.begin(), fps.end(), [&](const auto& a, const auto& b) {
    return graph.discovery_index(a) < graph.discovery_index(b);
  });
  fps.erase(std::unique(fps.begin(), fps.end()), fps.end());
}

std::string base_label(const ComponentDescriptor& c) {
  std::string label = c.component_type;
  if (c.text && !c.text->empty()) label += " \"" + *c.text + "\"";
  label += " (" + to_string(c.relative_location) + ")";
  return label;
}

const ComponentDescriptor* offered_component(const ScreenState& state,
                                             const ComponentKey& key, ActionKind action) {
  const auto* c = state.find(key);
  return c && c->supported_actions.contains(action) ? c : nullptr;
}

}  // namespace

BeliefState initial_belief(const EventFlowGraph& graph) {
  if (graph.states().empty() || !graph.contains(graph.main_state)) {
    throw Error(ErrorKind::precondition, "event-flow graph has no main state");
  }
  return BeliefState{BeliefState::Mode::cold_start, {graph.main_state}};
}

std::vector<StateFingerprint> states_in_play(const EventFlowGraph& graph,
                                             const BeliefState& belief) {
  std::vector<StateFingerprint> out;
  if (belief.all_known()) {
    for (const auto& s : graph.states()) out.push_back(s.fingerprint);
    return out;
  }
  for (const auto& fp : belief.candidates) {
    if (graph.contains(fp)) out.push_back(fp);
  }
  if (belief.mode == BeliefState::Mode::tracked) {
    for (const auto& fp : belief.candidates) {
      for (const auto* t : graph.transitions_from(fp)) out.push_back(t->to);
    }
  }
  sort_by_discovery(graph, out);
  return out;
}

std::vector<ActionKind> suggest_actions(const EventFlowGraph& graph,
                                        const BeliefState& belief) {
  if (belief.all_known()) {
    return {std::begin(kAllActionKinds), std::end(kAllActionKinds)};
  }
  ActionSet actions;
  for (const auto& fp : states_in_play(graph, belief)) {
    for (const auto& c : graph.find_state(fp)->components) actions |= c.supported_actions;
  }
  return actions.kinds();
}

std::vector<CandidateComponent> suggest_components(const EventFlowGraph& graph,
                                                   const BeliefState& belief,
                                                   ActionKind action) {
  std::vector<CandidateComponent> out;
  std::map<ComponentKey, std::size_t> position;
  for (const auto& fp : states_in_play(graph, belief)) {
    const auto& state = *graph.find_state(fp);
    std::optional<ScreenshotDoc> full;
    for (const auto& c : state.components) {
      if (!c.supported_actions.contains(action)) continue;
      const auto key = c.key();
      if (auto it = position.find(key); it != position.end()) {
        out[it->second].states.push_back(fp);
        continue;
      }
      if (!full) full = render_screen(state);
      position.emplace(key, out.size());
      out.push_back(CandidateComponent{c, base_label(c), crop(*full, c), {fp}});
    }
  }

  // Repeated (type, text) pairs get "Option N" in list order.
  std::map<std::pair<std::string, std::string>, int> group_size;
  for (const auto& cand : out) {
    ++group_size[{cand.descriptor.component_type, cand.descriptor.text.value_or("")}];
  }
  std::map<std::pair<std::string, std::string>, int> seen;
  for (auto& cand : out) {
    const std::pair<std::string, std::string> group{cand.descriptor.component_type,
                                                    cand.descriptor.text.value_or("")};
    if (group_size[group] > 1) cand.label += " Option " + std::to_string(++seen[group]);
  }
  return out;
}

std::vector<CandidateShot> candidate_screenshots(const EventFlowGraph& graph,
                                                 const BeliefState& belief,
                                                 ActionKind action,
                                                 const ComponentKey& key) {
  const auto in_play = states_in_play(graph, belief);
  auto collect = [&](bool from_candidates) {
    std::vector<CandidateShot> shots;
    for (const auto& fp : in_play) {
      const bool is_candidate =
          belief.all_known() || std::find(belief.candidates.begin(),
                                          belief.candidates.end(),
                                          fp) != belief.candidates.end();
      if (is_candidate != from_candidates) continue;
      const auto& state = *graph.find_state(fp);
      if (const auto* c = offered_component(state, key, action)) {
        shots.push_back(CandidateShot{fp, augment(render_screen(state), *c)});
      }
    }
    return shots;
  };
  auto shots = collect(true);
  if (shots.empty()) shots = collect(false);
  if (shots.empty()) {
    throw Error(ErrorKind::stale_suggestion,
                "component " + to_string(key) + " is not offered for " +
                    std::string(to_string(action)) + " at this step");
  }
  return shots;
}

BeliefState advance_belief(const EventFlowGraph& graph, const BeliefState&,
                           const ReproStep& step) {
  const auto* resolved = step.resolved();
  if (!resolved || !graph.contains(resolved->state)) return BeliefState::everything();

  std::vector<StateFingerprint> next;
  for (const auto* t : graph.transitions_from(resolved->state)) {
    if (t->component == resolved->key && t->action.kind() == step.action.kind()) {
      next.push_back(t->to);
    }
  }
  if (next.empty()) {
    const bool left_app = std::any_of(
        graph.exits.begin(), graph.exits.end(), [&](const ActionSite& site) {
          return site.state == resolved->state && site.component == resolved->key &&
                 site.action == step.action.kind();
        });
    if (left_app) return BeliefState::everything();
    next.push_back(resolved->state);
  }
  sort_by_discovery(graph, next);
  return BeliefState{BeliefState::Mode::tracked, std::move(next)};
}

BeliefState fold_belief(const EventFlowGraph& graph, const std::vector<ReproStep>& steps) {
  auto belief = initial_belief(graph);
  for (const auto& step : steps) belief = advance_belief(graph, belief, step);
  return belief;
}

ReportDraft record_step(const EventFlowGraph& graph, ReportDraft draft, ReproStep step) {
  if (draft.finalized_as) {
    throw Error(ErrorKind::conflict, "draft " + draft.draft_id + " is already finalized");
  }
  const int expected = static_cast<int>(draft.steps.size()) + 1;
  if (step.step_num != expected) {
    throw Error(ErrorKind::sequencing, "expected step " + std::to_string(expected) +
                                           ", got " + std::to_string(step.step_num));
  }
  if (const auto* resolved = step.resolved()) {
    const auto in_play = states_in_play(graph, draft.belief);
    const bool offered_state =
        std::find(in_play.begin(), in_play.end(), resolved->state) != in_play.end();
    const auto* state = graph.find_state(resolved->state);
    const auto* comp =
        offered_state ? offered_component(*state, resolved->key, step.action.kind())
                      : nullptr;
    if (!comp) {
      throw Error(ErrorKind::stale_suggestion,
                  "component " + to_string(resolved->key) +
                      " was not offered in the confirmed state");
    }
    if (augment(render_screen(*state), *comp).doc.address != resolved->shot) {
      throw Error(ErrorKind::stale_suggestion,
                  "confirmation screenshot does not match state and component");
    }
    step.activity_name = state->activity_name;
  } else {
    step.activity_name.clear();
  }
  draft.belief = advance_belief(graph, draft.belief, step);
  draft.steps.push_back(std::move(step));
  return draft;
}

ReportDraft delete_step(const EventFlowGraph& graph, ReportDraft draft, int step_num) {
  if (draft.finalized_as) {
    throw Error(ErrorKind::conflict, "draft " + draft.draft_id + " is already finalized");
  }
  if (step_num < 1 || step_num > static_cast<int>(draft.steps.size())) {
    throw Error(ErrorKind::not_found, "no step " + std::to_string(step_num));
  }
  draft.steps.erase(draft.steps.begin() + (step_num - 1));
  for (std::size_t i = 0; i < draft.steps.size(); ++i) {
    draft.steps[i].step_num = static_cast<int>(i) + 1;
  }
  draft.belief = fold_belief(graph, draft.steps);
  return draft;
}

std::vector<std::string> manual_entry_vocabulary(const StaticAppModel& model) {
  return component_types(model);
}

}  // namespace reprokit
