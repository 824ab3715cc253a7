// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <expat.h>
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "reprokit/error.hpp"
#include "reprokit/reporting.hpp"
#include "reprokit/suggestion.hpp"
#include "support.hpp"

using namespace reprokit;
using namespace testsupport;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Check {
 public:
  void fail(const std::string& why) {
    if (out_.pass) out_.detail = why;
    out_.pass = false;
  }
  void expect(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
  void note(std::string detail) {
    if (out_.pass) out_.detail = std::move(detail);
  }
  Outcome result() const { return out_; }

 private:
  Outcome out_;
};

int run_cli(const std::string& args, const fs::path& out_file) {
  const auto cmd = "'" + cli_path().string() + "' " + args + " >'" + out_file.string() +
                   "' 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// -- criteria -----------------------------------------------------------------

Outcome ripper_oracle() {
  Check c;
  int bundles = 0;
  std::size_t states = 0, transitions = 0, largest = 0;
  double slowest = 0;
  for (std::uint32_t seed = 1; seed <= 30; ++seed, ++bundles) {
    TempDir dir("reprokit-acc");
    generate_bundle(dir.path(), seed);
    const auto bundle = load_bundle(dir.path());
    auto device = simulate(bundle);
    const auto start = std::chrono::steady_clock::now();
    const auto g = rip(*device, build_static_model(bundle)).graph;
    const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
    slowest = std::max(slowest, took.count());
    states += g.states().size();
    transitions += g.transitions.size();
    largest = std::max(largest, g.states().size());
    std::set<std::string> ripped;
    for (const auto& s : g.states()) ripped.insert(s.fingerprint.digest);
    c.expect(ripped == click_reachable_fingerprints(*device),
             "seed " + std::to_string(seed) + ": state set differs from reachability");
    c.expect(took.count() < 5.0, "seed " + std::to_string(seed) + ": rip took over 5 s");
  }
  std::ostringstream d;
  d << bundles << " bundles agree (" << states << " states, " << transitions
    << " transitions, largest " << largest << " states), slowest " << slowest << " s";
  c.note(d.str());
  return c.result();
}

Outcome analyze_determinism() {
  Check c;
  TempDir dir("reprokit-acc");
  const auto bundle = minidoc_dir().string();
  std::vector<std::string> graphs, models;
  for (const char* store : {"a", "a", "b"}) {
    const auto root = dir / store;
    const int code = run_cli("analyze '" + bundle + "' --store '" + root.string() + "'",
                             dir / "out.txt");
    c.expect(code == 0, "analyze exited " + std::to_string(code));
    graphs.push_back(read_text(root / "apps/minidoc/1.0/graph.efg"));
    models.push_back(read_text(root / "apps/minidoc/1.0/static.model"));
  }
  c.expect(!graphs[0].empty() && !models[0].empty(), "no output documents");
  c.expect(std::adjacent_find(graphs.begin(), graphs.end(), std::not_equal_to<>()) == graphs.end(),
           "graph.efg differs between runs");
  c.expect(std::adjacent_find(models.begin(), models.end(), std::not_equal_to<>()) == models.end(),
           "static.model differs between runs");
  c.note("3 runs byte-identical");
  return c.result();
}

// Shared by the soundness and replay criteria: walks a true trace through the
// engine, confirming the shot of the state the reporter is really in.
struct TraceRun {
  ReportDraft draft;
  bool sound = true;
  std::string problem;
};

TraceRun walk_trace(const RippedApp& app, const std::vector<TrueStep>& trace) {
  TraceRun run{empty_draft(app.graph()), true, {}};
  const auto& g = app.graph();
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto truth = app.fp(trace[i].state_id);
    const auto actions = suggest_actions(g, run.draft.belief);
    const auto comps = suggest_components(g, run.draft.belief, ActionKind::click);
    const bool has_action =
        std::find(actions.begin(), actions.end(), ActionKind::click) != actions.end();
    const bool has_comp = std::any_of(comps.begin(), comps.end(), [&](const auto& cand) {
      return cand.descriptor.key() == trace[i].component;
    });
    if (!has_action || !has_comp) {
      run.sound = false;
      run.problem = "step " + std::to_string(i + 1) + ": true " +
                    (has_action ? "component " + to_string(trace[i].component) : "action") +
                    " not suggested";
      return run;
    }
    run.draft = record_step(g, run.draft,
                            confirm_step(g, run.draft.belief, static_cast<int>(i) + 1,
                                         Action::click(), trace[i].component, &truth));
  }
  return run;
}

Outcome suggestion_soundness() {
  Check c;
  std::mt19937 rng(20261019);
  int traces = 0, steps = 0;
  for (std::uint32_t seed = 1000; traces < 150; ++seed) {
    TempDir dir("reprokit-acc");
    generate_bundle(dir.path(), seed);
    const auto app = rip_bundle(dir.path());
    if (!app->graph().complete) {
      c.fail("seed " + std::to_string(seed) + ": rip incomplete");
      continue;
    }
    for (int t = 0; t < 5; ++t) {
      const auto trace = sample_click_trace(*app->device, rng, 10);
      if (trace.empty()) continue;
      ++traces;
      steps += static_cast<int>(trace.size());
      try {
        const auto run = walk_trace(*app, trace);
        c.expect(run.sound, "seed " + std::to_string(seed) + " " + run.problem);
      } catch (const std::exception& e) {
        c.fail("seed " + std::to_string(seed) + ": " + e.what());
      }
    }
  }
  c.note(std::to_string(traces) + " traces, " + std::to_string(steps) + " steps, 100% suggested");
  return c.result();
}

Outcome replay_fidelity() {
  Check c;
  std::mt19937 rng(77);
  int replayed = 0, rejected = 0;
  for (std::uint32_t seed = 2000; replayed < 120; ++seed) {
    TempDir dir("reprokit-acc");
    generate_bundle(dir.path(), seed);
    const auto app = rip_bundle(dir.path());
    for (int t = 0; t < 4; ++t) {
      const auto trace = sample_click_trace(*app->device, rng, 10);
      if (trace.empty()) continue;
      try {
        const auto run = walk_trace(*app, trace);
        if (!run.sound) {
          c.fail("seed " + std::to_string(seed) + " " + run.problem);
          continue;
        }
        const auto id = "gen-" + std::to_string(replayed + 1);
        const auto report = finalize(run.draft, app->graph(), app->model, id, "t").report;
        ++replayed;
        if (!is_replayable(report, app->graph())) {
          c.fail(id + ": not replayable");
          continue;
        }
        auto fresh = simulate(app->bundle);
        const auto outcome = replay(to_script(report, app->graph()), *fresh);
        c.expect(outcome.status == ReplayOutcome::Status::success,
                 id + ": " + std::string(to_string(outcome.status)) + " at step " +
                     std::to_string(outcome.step_num));

        // Same steps with one swapped for the manual form.
        auto manual_draft = run.draft;
        const auto victim = std::uniform_int_distribution<std::size_t>(
            0, manual_draft.steps.size() - 1)(rng);
        const auto& desc = *app->graph()
                                .find_state(manual_draft.steps[victim].resolved()->state)
                                ->find(manual_draft.steps[victim].resolved()->key);
        manual_draft.steps[victim].component = ManualComponent{
            desc.component_type, desc.text.value_or(""), desc.relative_location};
        const auto manual_report =
            finalize(manual_draft, app->graph(), app->model, id + "m", "t").report;
        const bool refused = !is_replayable(manual_report, app->graph());
        rejected += refused;
        c.expect(refused, id + "m: report with a manual step was accepted");
      } catch (const std::exception& e) {
        c.fail("seed " + std::to_string(seed) + ": " + e.what());
      }
    }
  }
  c.note(std::to_string(replayed) + " replayed to success, " + std::to_string(rejected) +
         " manual reports rejected");
  return c.result();
}

Outcome minidoc_step_one() {
  Check c;
  const auto app = rip_bundle(minidoc_dir());
  const auto& g = app->graph();
  const auto comps = suggest_components(g, initial_belief(g), ActionKind::click);
  std::set<ComponentKey> offered;
  for (const auto& cand : comps) offered.insert(cand.descriptor.key());
  std::set<ComponentKey> expected;
  for (const auto& comp : app->model.components) {
    if (comp.activity_name == "Main" && comp.supported_actions.contains(ActionKind::click)) {
      expected.insert(comp.key());
    }
  }
  c.expect(expected.size() == 2, "fixture should declare two clickable Main components");
  c.expect(offered == expected, "step-1 suggestions differ from Main's clickable components");
  const auto ok = std::find_if(comps.begin(), comps.end(),
                               [](const auto& cand) { return cand.descriptor.text == "OK"; });
  c.expect(ok != comps.end(), "no OK component offered");
  if (ok != comps.end()) {
    c.expect(ok->descriptor.component_type == "Button", "OK is not a Button");
    c.expect(to_string(ok->descriptor.relative_location) == "Middle Center",
             "OK is labeled " + to_string(ok->descriptor.relative_location));
    c.note("offered: " + comps[0].label + ", " + comps[1].label);
  }
  return c.result();
}

// Section ids in order, and for each step item the set of field classes.
struct PageShape {
  std::vector<std::string> sections;
  std::vector<std::set<std::string>> step_fields;
  int gallery_entries = 0;
  int depth_in_step = 0;
  bool well_formed = false;
};

PageShape page_shape(const std::string& page) {
  PageShape shape;
  XML_Parser p = XML_ParserCreate(nullptr);
  XML_SetUserData(p, &shape);
  XML_SetElementHandler(
      p,
      [](void* data, const XML_Char* name, const XML_Char** atts) {
        auto& s = *static_cast<PageShape*>(data);
        std::string id, cls;
        for (int i = 0; atts[i]; i += 2) {
          if (std::string(atts[i]) == "id") id = atts[i + 1];
          if (std::string(atts[i]) == "class") cls = atts[i + 1];
        }
        if (std::string(name) == "section") s.sections.push_back(id);
        if (std::string(name) == "li" && cls == "step") {
          s.step_fields.emplace_back();
          s.depth_in_step = 1;
          return;
        }
        if (cls == "gallery-entry") ++s.gallery_entries;
        if (s.depth_in_step > 0) {
          ++s.depth_in_step;
          std::istringstream words(cls);
          for (std::string w; words >> w;) s.step_fields.back().insert(w);
        }
      },
      [](void* data, const XML_Char*) {
        auto& s = *static_cast<PageShape*>(data);
        if (s.depth_in_step > 0) --s.depth_in_step;
      });
  shape.well_formed = XML_Parse(p, page.data(), static_cast<int>(page.size()), 1) == XML_STATUS_OK;
  XML_ParserFree(p);
  return shape;
}

std::vector<BugReport> fixture_reports() {
  std::vector<BugReport> out;
  const auto minidoc = rip_bundle(minidoc_dir());
  const auto cov = rip_bundle(coverage_fixture_dir());
  const ComponentKey ok{"Main", "btn_ok", 1}, open{"Main", "btn_open", 1};
  const ComponentKey page{"Viewer", "txt_page", 1}, go{"Viewer", "btn_go", 1};

  auto build = [&](const RippedApp& app, const std::vector<std::pair<Action, ComponentKey>>& steps,
                   const std::string& title, bool manual_last, const std::string& notes) {
    auto draft = empty_draft(app.graph(), title);
    for (const auto& [action, key] : steps) {
      auto step = confirm_step(app.graph(), draft.belief,
                               static_cast<int>(draft.steps.size()) + 1, action, key);
      step.notes = notes;
      draft = record_step(app.graph(), draft, step);
    }
    if (manual_last) {
      ReproStep m;
      m.step_num = static_cast<int>(draft.steps.size()) + 1;
      m.component = ManualComponent{"Button", "Share <externally>", *parse_grid_cell("Bottom Right")};
      m.notes = "Not in this list";
      draft = record_step(app.graph(), draft, m);
    }
    const auto id = app.model.app_id + "-" + std::to_string(out.size() + 1);
    out.push_back(finalize(draft, app.graph(), app.model, id, "2026-10-19T12:00:00Z").report);
  };

  const auto& m = *minidoc;
  build(m, {{Action::click(), ok}}, "Dialog shows twice", false, "");
  build(m, {{Action::click(), ok}, {Action::click(), open}}, "Viewer is blank", false, "");
  build(m, {{Action::click(), open}, {Action::type("12"), page}, {Action::click(), go}},
        "Go ignores page number", false, "page 12 exists");
  build(m, {{Action::click(), open}, {Action::click(), go}}, "Go with empty page crashes", false, "");
  build(m, {{Action::click(), open}}, "Open takes 10 s", true, "");
  build(m, {{Action::click(), ok}, {Action::click(), open}, {Action::type("x & y"), page}},
        "Unicode & markup <b>", false, "quotes \" and 'apostrophes'");
  build(m, {}, "Manual only", true, "");
  const auto& cv = *cov;
  build(cv, {{Action::click(), ComponentKey{"Home", "btn_start", 1}}}, "Timer does not start", false, "");
  build(cv, {{Action::click(), ComponentKey{"Home", "btn_help", 1}}}, "Help opens browser", false, "");
  build(cv, {{Action::click(), ComponentKey{"Home", "btn_start", 1}}}, "Landscape layout", true,
        "rotated");
  return out;
}

Outcome report_structure() {
  Check c;
  const auto reports = fixture_reports();
  const std::set<std::string> fields{"action", "component-type", "relative-location",
                                     "activity-source", "component-image"};
  for (const auto& r : reports) {
    const auto shape = page_shape(render(r, "web-page"));
    c.expect(shape.well_formed, r.report_id + ": web page is not well-formed");
    c.expect(shape.sections == std::vector<std::string>{"preliminary", "steps", "gallery"},
             r.report_id + ": sections missing or out of order");
    c.expect(shape.step_fields.size() == r.steps.size(), r.report_id + ": step count differs");
    for (const auto& present : shape.step_fields) {
      c.expect(std::includes(present.begin(), present.end(), fields.begin(), fields.end()),
               r.report_id + ": a step lacks one of the five fields");
    }
    c.expect(shape.gallery_entries == static_cast<int>(r.full_shots.size()),
             r.report_id + ": gallery size differs");
    c.expect(parse_structured_report(render(r, "structured")) == r,
             r.report_id + ": structured round-trip differs");
  }
  c.expect(reports.size() == 10, "expected 10 fixture reports");
  c.note(std::to_string(reports.size()) + " reports: 3 sections, 5 fields per step, round-trip equal");
  return c.result();
}

Outcome coverage_statistic() {
  Check c;
  TempDir dir("reprokit-acc");
  const int code = run_cli("analyze '" + coverage_fixture_dir().string() + "' --store '" +
                               (dir / "store").string() + "'",
                           dir / "out.txt");
  const auto out = read_text(dir / "out.txt");
  c.expect(code == 0, "analyze exited " + std::to_string(code));
  c.expect(out == "1/5 activities\n", "printed '" + out + "'");
  c.note("printed \"1/5 activities\"");
  return c.result();
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"ripper-oracle-equivalence", ripper_oracle},
      {"analyze-determinism", analyze_determinism},
      {"suggestion-soundness", suggestion_soundness},
      {"replay-fidelity", replay_fidelity},
      {"minidoc-step-one", minidoc_step_one},
      {"report-structure", report_structure},
      {"coverage-statistic", coverage_statistic},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = Outcome{false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
