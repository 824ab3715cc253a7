#include "support.hpp"

#include <unistd.h>

#include <atomic>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>

#include "reprokit/error.hpp"

namespace testsupport {

using namespace reprokit;

fs::path fixtures_dir() { return fs::path(REPROKIT_FIXTURES_DIR); }
fs::path minidoc_dir() { return fixtures_dir() / "minidoc"; }
fs::path coverage_fixture_dir() { return fixtures_dir() / "coverage5"; }
fs::path cli_path() { return fs::path(REPROKIT_CLI_PATH); }

TempDir::TempDir(const std::string& prefix) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          (prefix + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_text(const fs::path& path, std::string_view text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void copy_bundle(const fs::path& from, const fs::path& to, const std::string* behavior_override) {
  fs::create_directories(to);
  fs::copy(from, to, fs::copy_options::recursive | fs::copy_options::overwrite_existing);
  if (behavior_override) write_text(to / "behavior.model", *behavior_override);
}

namespace {

int uniform(std::mt19937& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double unit(std::mt19937& rng) { return std::uniform_real_distribution<double>(0, 1)(rng); }

}  // namespace

void generate_bundle(const fs::path& dir, std::uint32_t seed, const GeneratorLimits& limits) {
  std::mt19937 rng(seed);
  const int activities = uniform(rng, 1, limits.max_activities);
  struct St {
    std::string id, activity, window;
    std::vector<std::string> clickable;
    std::vector<std::string> long_clickable;
  };
  std::vector<St> states;
  for (int a = 0; a < activities; ++a) {
    const int windows = uniform(rng, 1, limits.max_windows_per_activity);
    for (int w = 0; w < windows; ++w) {
      states.push_back({"s" + std::to_string(states.size()), "A" + std::to_string(a),
                        "w" + std::to_string(w), {}, {}});
    }
  }

  static const char* kTypes[] = {"Button", "Button",   "CheckBox", "ListItem",
                                 "EditText", "TextView", "Spinner", "ImageButton"};
  static const char* kTexts[] = {"OK", "Next", "Item", "Cancel", "Open"};
  std::map<std::string, std::vector<std::string>> sources;

  for (std::size_t i = 0; i < states.size(); ++i) {
    auto& st = states[i];
    std::ostringstream xml;
    xml << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<layout activity=\"" << st.activity
        << "\" window=\"" << st.window << "\">\n";
    const int n = uniform(rng, 1, limits.max_components);
    for (int k = 0; k < n; ++k) {
      const std::string type = kTypes[uniform(rng, 0, 7)];
      const std::string id = "v" + std::to_string(i) + "_" + std::to_string(k);
      const int left = uniform(rng, 0, 1000), top = uniform(rng, 0, 1770);
      const int right = left + uniform(rng, 40, 200), bottom = top + uniform(rng, 40, 150);
      xml << "  <" << type << " id=\"" << id << "\"";
      if (unit(rng) < 0.8) xml << " text=\"" << kTexts[uniform(rng, 0, 4)] << "\"";
      xml << " bounds=\"" << left << "," << top << "," << right << "," << bottom << "\"";
      ActionSet actions = default_actions(type);
      if (unit(rng) < 0.2) {
        actions.insert(ActionKind::long_click);
        xml << " actions=\"";
        bool first = true;
        for (auto kind : actions.kinds()) {
          xml << (first ? "" : ",") << to_string(kind);
          first = false;
        }
        xml << "\"";
      }
      xml << "/>\n";
      if (actions.contains(ActionKind::click)) st.clickable.push_back(id);
      if (actions.contains(ActionKind::long_click)) st.long_clickable.push_back(id);
      if (unit(rng) < 0.3) sources[id].push_back(st.activity + ".src");
    }
    xml << "</layout>\n";
    write_text(dir / "layouts" / (st.activity + "." + st.window + ".xml"), xml.str());
  }

  std::ostringstream model;
  model << "behavior-model 1\ninitial s0\n";
  for (const auto& st : states) {
    model << "state " << st.id << " activity=" << st.activity << " window=" << st.window << "\n";
  }
  auto random_state = [&] { return states[uniform(rng, 0, static_cast<int>(states.size()) - 1)].id; };
  for (const auto& st : states) {
    for (const auto& id : st.clickable) {
      const double r = unit(rng);
      std::string target;
      if (r < limits.exit_rate) {
        target = std::string(kExitTarget);
      } else if (r < limits.exit_rate + limits.external_rate) {
        target = std::string(kExternalTarget);
      } else if (r < 0.85) {
        target = random_state();
      } else if (r < 0.93) {
        target = st.id;
      }  // otherwise no entry: the click does nothing
      if (!target.empty()) model << "on " << st.id << " " << id << " click -> " << target << "\n";
    }
    for (const auto& id : st.long_clickable) {
      model << "on " << st.id << " " << id << " long-click -> " << random_state() << "\n";
    }
  }
  write_text(dir / "behavior.model", model.str());

  std::ostringstream manifest;
  manifest << "{\"app_id\": \"gen" << seed << "\", \"app_version\": \"1\", \"main_activity\": \""
           << states[0].activity << "\"}\n";
  write_text(dir / "manifest.json", manifest.str());

  std::ostringstream index;
  index << "{";
  bool first = true;
  for (const auto& [id, units] : sources) {
    index << (first ? "" : ",") << "\"" << id << "\": [\"" << units.front() << "\"]";
    first = false;
  }
  index << "}\n";
  write_text(dir / "sources" / "index.json", index.str());
}

std::string next_state(const BehaviorModel& model, const std::string& state_id,
                       const ComponentKey& component) {
  auto it = model.table.find(BehaviorKey{state_id, component.resource_id, ActionKind::click});
  if (it == model.table.end() || it->second == kExternalTarget) return state_id;
  return it->second;  // may be kExitTarget
}

std::set<std::string> click_reachable_fingerprints(const SimulatedDevice& device) {
  const auto& model = device.model();
  std::set<std::string> seen{model.initial};
  std::deque<std::string> queue{model.initial};
  while (!queue.empty()) {
    const auto id = queue.front();
    queue.pop_front();
    for (const auto& c : device.screen_of(id).components) {
      if (!c.supported_actions.contains(ActionKind::click)) continue;
      const auto next = next_state(model, id, c.key());
      if (next == kExitTarget) continue;
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  std::set<std::string> fps;
  for (const auto& id : seen) fps.insert(fingerprint(device.screen_of(id)).digest);
  return fps;
}

std::vector<TrueStep> sample_click_trace(const SimulatedDevice& device, std::mt19937& rng,
                                         int max_len) {
  std::vector<TrueStep> trace;
  std::string state = device.model().initial;
  const int len = uniform(rng, 1, max_len);
  for (int i = 0; i < len; ++i) {
    std::vector<ComponentKey> options;
    for (const auto& c : device.screen_of(state).components) {
      if (!c.supported_actions.contains(ActionKind::click)) continue;
      if (next_state(device.model(), state, c.key()) == kExitTarget) continue;
      options.push_back(c.key());
    }
    if (options.empty()) break;
    const auto pick = options[uniform(rng, 0, static_cast<int>(options.size()) - 1)];
    trace.push_back(TrueStep{state, pick});
    state = next_state(device.model(), state, pick);
  }
  return trace;
}

StateFingerprint RippedApp::fp(const std::string& state_id) const {
  return fingerprint(device->screen_of(state_id));
}

std::unique_ptr<RippedApp> rip_bundle(const fs::path& dir) {
  auto app = std::make_unique<RippedApp>();
  app->bundle = load_bundle(dir);
  app->model = link_sources(build_static_model(app->bundle), app->bundle).model;
  app->device = simulate(app->bundle);
  app->result = rip(*app->device, app->model);
  return app;
}

void install_app(Store& store, const RippedApp& app) {
  const AppRef ref{app.model.app_id, app.model.app_version};
  store.save_static_model(app.model);
  store.save_graph(app.graph());
  for (const auto& [address, bytes] : app.result.shots) store.put_shot(ref, bytes);
  store.save_bundle_path(ref, app.bundle.root);
}

ReproStep confirm_step(const EventFlowGraph& graph, const BeliefState& belief, int step_num,
                       const Action& action, const ComponentKey& key,
                       const StateFingerprint* true_state) {
  const auto shots = candidate_screenshots(graph, belief, action.kind(), key);
  const CandidateShot* chosen = &shots.front();
  if (true_state) {
    chosen = nullptr;
    for (const auto& s : shots) {
      if (s.state == *true_state) chosen = &s;
    }
    if (!chosen) throw Error(ErrorKind::stale_suggestion, "true state has no candidate shot");
  }
  ReproStep step;
  step.step_num = step_num;
  step.action = action;
  step.component = ResolvedComponent{key, chosen->state, chosen->shot.doc.address};
  return step;
}

ReportDraft empty_draft(const EventFlowGraph& graph, const std::string& title) {
  ReportDraft d;
  d.draft_id = "draft-test";
  d.app_id = graph.app_id;
  d.app_version = graph.app_version;
  d.header = ReportHeader{"Ada", "tablet", Orientation::portrait, title, "It breaks."};
  d.belief = initial_belief(graph);
  return d;
}

}  // namespace testsupport
