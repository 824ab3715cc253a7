// reprokit command-line entry point.
//
// Exit codes:
//   0  success
//   1  runtime failure (I/O, exploration aborted, cannot bind)
//   2  bad input: malformed bundle, unknown id, unknown format, usage error
//   3  replay diverged from the recorded event flow
//   4  report is not replayable (manual steps or broken transition chain)
//   5  replay aborted by a driver failure

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <pthread.h>

#include <CLI11.hpp>

#include "reprokit/error.hpp"
#include "reprokit/primer.hpp"
#include "reprokit/reporting.hpp"
#include "reprokit/ripper.hpp"
#include "reprokit/service.hpp"
#include "reprokit/store.hpp"

namespace fs = std::filesystem;
using namespace reprokit;

namespace {

enum Exit : int {
  kOk = 0,
  kFailure = 1,
  kBadInput = 2,
  kDiverged = 3,
  kNotReplayable = 4,
  kDriverFailure = 5,
};

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : std::move(fallback);
}

int exit_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::bundle_malformed:
    case ErrorKind::parse_error:
    case ErrorKind::duplicate_id:
    case ErrorKind::model_malformed:
    case ErrorKind::not_found:
    case ErrorKind::unknown_format:
    case ErrorKind::validation:
      return kBadInput;
    case ErrorKind::not_replayable:
      return kNotReplayable;
    default:
      return kFailure;
  }
}

int analyze(const fs::path& bundle_path, const fs::path& store_root, const RipConfig& config) {
  const auto bundle = load_bundle(bundle_path);
  auto linked = link_sources(build_static_model(bundle), bundle);
  for (const auto& w : linked.warnings) std::cerr << "warning: " << w << "\n";

  auto driver = simulate(bundle);
  RipResult ripped;
  try {
    ripped = rip(*driver, linked.model, config);
  } catch (const RipError& e) {
    std::cerr << "error: " << e.what() << " (" << e.partial().graph.states().size()
              << " states recorded before the failure)\n";
    return kFailure;
  }

  Store store(store_root);
  const AppRef app{linked.model.app_id, linked.model.app_version};
  store.save_static_model(linked.model);
  store.save_graph(ripped.graph);
  for (const auto& [address, bytes] : ripped.shots) store.put_shot(app, bytes);
  store.save_bundle_path(app, fs::absolute(bundle_path));

  std::cerr << app.app_id << " " << app.app_version << ": "
            << ripped.graph.states().size() << " states, "
            << ripped.graph.transitions.size() << " transitions, " << ripped.steps
            << " actions fired" << (ripped.graph.complete ? "" : " (budget exhausted)")
            << "\n";
  std::cout << format_coverage(activity_coverage(ripped.graph, linked.model)) << std::endl;
  return kOk;
}

int serve(const fs::path& store_root, const std::string& host, int port,
          const std::optional<fs::path>& ui_root) {
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  Store store(store_root);
  ServiceOptions options;
  options.ui_root = ui_root;
  Service service(store, options);
  if (!service.bind(host, port)) {
    std::cerr << "error: cannot bind " << host << ":" << port << "\n";
    return kFailure;
  }

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    service.stop();
  });
  std::cout << "listening on http://" << host << ":" << service.port() << std::endl;
  const bool clean = service.run();
  // Wake the waiter if the server stopped on its own.
  ::kill(::getpid(), SIGTERM);
  waiter.join();
  return clean ? kOk : kFailure;
}

int render_report(const fs::path& store_root, const std::string& id, const std::string& format,
                  const std::optional<fs::path>& out) {
  Store store(store_root);
  if (!store.has_report(id)) throw Error(ErrorKind::not_found, "no report " + id);
  const auto report = store.load_report(id);
  const auto text = render(report, format);
  if (!out) {
    std::cout << text;
    return kOk;
  }
  atomic_write(*out, text);
  if (format == "web-page") {
    const auto shots_dir = fs::absolute(*out).parent_path() / "shots";
    for (const auto& step : report.steps) {
      for (const auto& address : {step.crop_address, step.full_shot}) {
        if (address) atomic_write(shots_dir / (*address + ".svg"), store.get_shot(*address));
      }
    }
  }
  return kOk;
}

struct Replayable {
  BugReport report;
  EventFlowGraph graph;
};

Replayable load_replayable(const Store& store, const std::string& id) {
  if (!store.has_report(id)) throw Error(ErrorKind::not_found, "no report " + id);
  auto report = store.load_report(id);
  auto graph = store.load_graph({report.app_id, report.app_version});
  return {std::move(report), std::move(graph)};
}

int script_report(const fs::path& store_root, const std::string& id) {
  Store store(store_root);
  const auto r = load_replayable(store, id);
  std::cout << serialize_script(to_script(r.report, r.graph));
  return kOk;
}

int replay_report(const fs::path& store_root, const std::string& id,
                  const std::optional<fs::path>& bundle_override) {
  Store store(store_root);
  const auto r = load_replayable(store, id);
  if (!is_replayable(r.report, r.graph)) {
    std::cerr << "report " << id << " is not replayable\n";
    return kNotReplayable;
  }
  const auto script = to_script(r.report, r.graph);
  auto bundle_path = bundle_override;
  if (!bundle_path) bundle_path = store.load_bundle_path({r.report.app_id, r.report.app_version});
  if (!bundle_path) throw Error(ErrorKind::not_found, "no bundle recorded; pass --bundle");
  const auto bundle = load_bundle(*bundle_path);
  auto driver = simulate(bundle);

  const auto outcome = replay(script, *driver);
  std::cout << to_string(outcome.status);
  if (outcome.status != ReplayOutcome::Status::success) {
    std::cout << " step " << outcome.step_num;
    std::cerr << outcome.message << "\n";
  }
  std::cout << std::endl;
  switch (outcome.status) {
    case ReplayOutcome::Status::success: return kOk;
    case ReplayOutcome::Status::divergence: return kDiverged;
    case ReplayOutcome::Status::driver_failure: return kDriverFailure;
  }
  return kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analyze apps and build replayable bug reports"};
  app.require_subcommand(1);

  std::string store_root = env_or("REPROKIT_STORE", "reprokit-store");
  app.add_option("--store", store_root, "Store directory (env REPROKIT_STORE)");

  auto* analyze_cmd = app.add_subcommand("analyze", "Run static and dynamic analysis on a bundle");
  std::string bundle_path;
  RipConfig config;
  analyze_cmd->add_option("bundle", bundle_path, "App bundle directory")->required();
  analyze_cmd->add_option("--store", store_root, "Store directory");
  analyze_cmd->add_option("--max-depth", config.max_depth, "DFS depth budget")
      ->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--max-steps", config.max_steps, "Fired-action budget")
      ->check(CLI::PositiveNumber);

  auto* serve_cmd = app.add_subcommand("serve", "Serve the report API");
  int port = std::stoi(env_or("REPROKIT_PORT", "8080"));
  std::string host = env_or("REPROKIT_HOST", "127.0.0.1");
  std::string ui_root;
  serve_cmd->add_option("--store", store_root, "Store directory");
  serve_cmd->add_option("--port", port, "TCP port (env REPROKIT_PORT)")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--host", host, "Bind address (env REPROKIT_HOST)");
  serve_cmd->add_option("--ui", ui_root, "Directory of static UI assets to serve at /");

  auto* report_cmd = app.add_subcommand("report", "Render or replay finalized reports");
  report_cmd->require_subcommand(1);
  report_cmd->add_option("--store", store_root, "Store directory");
  std::string report_id;
  std::string format = "structured";
  std::string out_path;
  auto* render_cmd = report_cmd->add_subcommand("render", "Render a report");
  render_cmd->add_option("id", report_id, "Report id")->required();
  render_cmd->add_option("--format", format, "structured | web-page")->required();
  render_cmd->add_option("--out", out_path, "Output file (stdout when absent)");
  auto* replay_cmd = report_cmd->add_subcommand("replay", "Replay a report on the simulator");
  std::string replay_bundle;
  replay_cmd->add_option("id", report_id, "Report id")->required();
  replay_cmd->add_option("--bundle", replay_bundle, "Bundle to simulate (default: analyzed one)");
  auto* script_cmd = report_cmd->add_subcommand("script", "Print the replay script of a report");
  script_cmd->add_option("id", report_id, "Report id")->required();
  // Let "--store" follow the report id as well as precede the subcommand.
  for (auto* sub : {render_cmd, replay_cmd, script_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*analyze_cmd) return analyze(bundle_path, store_root, config);
    if (*serve_cmd) {
      return serve(store_root, host, port,
                   ui_root.empty() ? std::nullopt : std::optional<fs::path>(ui_root));
    }
    if (*render_cmd) {
      return render_report(store_root, report_id, format,
                           out_path.empty() ? std::nullopt : std::optional<fs::path>(out_path));
    }
    if (*replay_cmd) {
      return replay_report(store_root, report_id,
                           replay_bundle.empty() ? std::nullopt
                                                 : std::optional<fs::path>(replay_bundle));
    }
    if (*script_cmd) return script_report(store_root, report_id);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
