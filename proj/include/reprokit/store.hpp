#pragma once

// Plain-directory persistence:
//
//   <root>/apps/<app_id>/<version>/static.model
//   <root>/apps/<app_id>/<version>/graph.efg
//   <root>/apps/<app_id>/<version>/bundle.path
//   <root>/apps/<app_id>/<version>/shots/<address>.svg
//   <root>/drafts/<draft_id>
//   <root>/reports/<report_id>
//   <root>/idempotency/<digest>
//   <root>/counters/<name>
//
// Every document is written whole to a temporary file and renamed into place.

#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "reprokit/primer.hpp"
#include "reprokit/reporting.hpp"
#include "reprokit/suggestion.hpp"

namespace reprokit {

struct AppRef {
  std::string app_id;
  std::string app_version;

  auto operator<=>(const AppRef&) const = default;
};

/// Test hook: called with the temporary path after the first half of the data
/// has been written. Throwing from it simulates a crash mid-write.
using WriteFaultHook = std::function<void(const std::filesystem::path& tmp)>;

/// Writes `bytes` to `path` via write-to-temp + rename.
void atomic_write(const std::filesystem::path& path, std::string_view bytes,
                  const WriteFaultHook& fault = {});

class Store {
 public:
  explicit Store(std::filesystem::path root);

  const std::filesystem::path& root() const noexcept { return root_; }

  /// Idempotent; returns the content address.
  std::string put_shot(const AppRef& app, std::string_view bytes);
  /// Throws Error(not_found).
  std::string get_shot(const std::string& address) const;
  bool has_shot(const AppRef& app, const std::string& address) const;

  void save_static_model(const StaticAppModel& model);
  StaticAppModel load_static_model(const AppRef& app) const;
  void save_graph(const EventFlowGraph& graph);
  EventFlowGraph load_graph(const AppRef& app) const;
  void save_bundle_path(const AppRef& app, const std::filesystem::path& bundle);
  std::optional<std::filesystem::path> load_bundle_path(const AppRef& app) const;
  bool has_app(const AppRef& app) const;
  std::vector<AppRef> list_apps() const;

  void save_draft(const ReportDraft& draft);
  ReportDraft load_draft(const std::string& draft_id) const;
  bool has_draft(const std::string& draft_id) const;

  void save_report(const BugReport& report);
  BugReport load_report(const std::string& report_id) const;
  bool has_report(const std::string& report_id) const;

  /// Fresh identifiers: "draft-<n>" and "<app_id>-<n>", monotonic per store.
  std::string next_draft_id();
  std::string next_report_id(const std::string& app_id);

  std::optional<std::string> recall_response(const std::string& token_key) const;
  void remember_response(const std::string& token_key, std::string_view response);

  std::filesystem::path app_dir(const AppRef& app) const;

 private:
  std::uint64_t next_counter(const std::string& name);

  std::filesystem::path root_;
  std::mutex counter_mutex_;
};

/// Rejects identifiers that could escape the store directory.
bool safe_store_name(std::string_view name);

}  // namespace reprokit
