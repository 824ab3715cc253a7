#include "reprokit/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>

#include "reprokit/documents.hpp"
#include "reprokit/error.hpp"

namespace fs = std::filesystem;

namespace reprokit {

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::not_found, "no such document: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Fd {
 public:
  explicit Fd(int fd) : fd_(fd) {}
  ~Fd() {
    if (fd_ >= 0) ::close(fd_);
  }
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  int get() const noexcept { return fd_; }

 private:
  int fd_;
};

void write_all(int fd, std::string_view bytes, const fs::path& path) {
  while (!bytes.empty()) {
    const auto n = ::write(fd, bytes.data(), bytes.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorKind::io_error, "write failed: " + path.string());
    }
    bytes.remove_prefix(static_cast<std::size_t>(n));
  }
}

void require_name(std::string_view name, std::string_view what) {
  if (!safe_store_name(name)) {
    throw Error(ErrorKind::not_found, "invalid " + std::string(what) + " '" +
                                          std::string(name) + "'");
  }
}

}  // namespace

bool safe_store_name(std::string_view name) {
  if (name.empty() || name == "." || name == ".." || name.size() > 200) return false;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
    if (!ok) return false;
  }
  return true;
}

void atomic_write(const fs::path& path, std::string_view bytes, const WriteFaultHook& fault) {
  static std::atomic<std::uint64_t> sequence{0};
  fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid()) + "." +
                       std::to_string(sequence.fetch_add(1));
  try {
    Fd fd(::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644));
    if (fd.get() < 0) throw Error(ErrorKind::io_error, "cannot create " + tmp.string());
    const auto half = bytes.size() / 2;
    write_all(fd.get(), bytes.substr(0, half), tmp);
    if (fault) fault(tmp);
    write_all(fd.get(), bytes.substr(half), tmp);
    if (::fsync(fd.get()) != 0) throw Error(ErrorKind::io_error, "fsync failed: " + tmp.string());
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::io_error, "rename failed: " + path.string());
  }
}

Store::Store(fs::path root) : root_(std::move(root)) {
  for (const char* sub : {"apps", "drafts", "reports", "idempotency", "counters"}) {
    fs::create_directories(root_ / sub);
  }
}

fs::path Store::app_dir(const AppRef& app) const {
  require_name(app.app_id, "app id");
  require_name(app.app_version, "app version");
  return root_ / "apps" / app.app_id / app.app_version;
}

std::string Store::put_shot(const AppRef& app, std::string_view bytes) {
  const auto address = sha256_hex(bytes);
  const auto path = app_dir(app) / "shots" / (address + ".svg");
  if (!fs::exists(path)) atomic_write(path, bytes);
  return address;
}

bool Store::has_shot(const AppRef& app, const std::string& address) const {
  return safe_store_name(address) &&
         fs::exists(app_dir(app) / "shots" / (address + ".svg"));
}

std::string Store::get_shot(const std::string& address) const {
  require_name(address, "shot address");
  // Shots may exist for apps whose analysis never completed, so scan every
  // version directory rather than list_apps().
  const auto apps = root_ / "apps";
  if (fs::is_directory(apps)) {
    for (const auto& id : fs::directory_iterator(apps)) {
      if (!id.is_directory()) continue;
      for (const auto& ver : fs::directory_iterator(id.path())) {
        const auto path = ver.path() / "shots" / (address + ".svg");
        if (fs::exists(path)) return read_file(path);
      }
    }
  }
  throw Error(ErrorKind::not_found, "no screenshot " + address);
}

void Store::save_static_model(const StaticAppModel& model) {
  atomic_write(app_dir({model.app_id, model.app_version}) / "static.model",
               serialize_static_model(model));
}

StaticAppModel Store::load_static_model(const AppRef& app) const {
  const auto path = app_dir(app) / "static.model";
  if (!fs::exists(path)) {
    throw Error(ErrorKind::not_found, "app " + app.app_id + " " + app.app_version + " not analyzed");
  }
  return parse_static_model(read_file(path), path.string());
}

void Store::save_graph(const EventFlowGraph& graph) {
  atomic_write(app_dir({graph.app_id, graph.app_version}) / "graph.efg",
               serialize_graph(graph));
}

EventFlowGraph Store::load_graph(const AppRef& app) const {
  const auto path = app_dir(app) / "graph.efg";
  if (!fs::exists(path)) {
    throw Error(ErrorKind::not_found, "app " + app.app_id + " " + app.app_version + " has no graph");
  }
  return parse_graph(read_file(path), path.string());
}

void Store::save_bundle_path(const AppRef& app, const fs::path& bundle) {
  atomic_write(app_dir(app) / "bundle.path", fs::absolute(bundle).lexically_normal().string() + "\n");
}

std::optional<fs::path> Store::load_bundle_path(const AppRef& app) const {
  const auto path = app_dir(app) / "bundle.path";
  if (!fs::exists(path)) return std::nullopt;
  auto text = read_file(path);
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  return fs::path(text);
}

bool Store::has_app(const AppRef& app) const {
  return safe_store_name(app.app_id) && safe_store_name(app.app_version) &&
         fs::exists(app_dir(app) / "static.model");
}

std::vector<AppRef> Store::list_apps() const {
  std::vector<AppRef> out;
  const auto apps = root_ / "apps";
  if (!fs::is_directory(apps)) return out;
  for (const auto& id : fs::directory_iterator(apps)) {
    if (!id.is_directory()) continue;
    for (const auto& ver : fs::directory_iterator(id.path())) {
      if (ver.is_directory() && fs::exists(ver.path() / "static.model")) {
        out.push_back({id.path().filename().string(), ver.path().filename().string()});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void Store::save_draft(const ReportDraft& draft) {
  require_name(draft.draft_id, "draft id");
  atomic_write(root_ / "drafts" / draft.draft_id, serialize_draft(draft));
}

ReportDraft Store::load_draft(const std::string& draft_id) const {
  require_name(draft_id, "draft id");
  const auto path = root_ / "drafts" / draft_id;
  return parse_draft(read_file(path), path.string());
}

bool Store::has_draft(const std::string& draft_id) const {
  return safe_store_name(draft_id) && fs::exists(root_ / "drafts" / draft_id);
}

void Store::save_report(const BugReport& report) {
  require_name(report.report_id, "report id");
  atomic_write(root_ / "reports" / report.report_id, render(report, RenderFormat::structured));
}

BugReport Store::load_report(const std::string& report_id) const {
  require_name(report_id, "report id");
  const auto path = root_ / "reports" / report_id;
  return parse_structured_report(read_file(path), path.string());
}

bool Store::has_report(const std::string& report_id) const {
  return safe_store_name(report_id) && fs::exists(root_ / "reports" / report_id);
}

std::uint64_t Store::next_counter(const std::string& name) {
  std::lock_guard lock(counter_mutex_);
  const auto value_path = root_ / "counters" / name;
  const auto lock_path = root_ / "counters" / (name + ".lock");
  Fd fd(::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644));
  if (fd.get() < 0) throw Error(ErrorKind::io_error, "cannot open " + lock_path.string());
  if (::flock(fd.get(), LOCK_EX) != 0) {
    throw Error(ErrorKind::io_error, "cannot lock " + lock_path.string());
  }
  std::uint64_t value = 0;
  if (fs::exists(value_path)) value = std::stoull(read_file(value_path));
  ++value;
  atomic_write(value_path, std::to_string(value) + "\n");
  ::flock(fd.get(), LOCK_UN);
  return value;
}

std::string Store::next_draft_id() { return "draft-" + std::to_string(next_counter("drafts")); }

std::string Store::next_report_id(const std::string& app_id) {
  require_name(app_id, "app id");
  return app_id + "-" + std::to_string(next_counter("reports"));
}

std::optional<std::string> Store::recall_response(const std::string& token_key) const {
  const auto path = root_ / "idempotency" / sha256_hex(token_key);
  if (!fs::exists(path)) return std::nullopt;
  return read_file(path);
}

void Store::remember_response(const std::string& token_key, std::string_view response) {
  atomic_write(root_ / "idempotency" / sha256_hex(token_key), response);
}

}  // namespace reprokit
