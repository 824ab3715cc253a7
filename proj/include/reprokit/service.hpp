#pragma once

// HTTP API over a Store. See docs/api.md for payload schemas.
//
//   GET    /api/apps
//   POST   /api/reports
//   GET    /api/reports/{id}[?format=structured|web-page]
//   GET    /api/reports/{draft}/suggest?kind=actions|components|shots|vocabulary
//   POST   /api/reports/{draft}/steps
//   DELETE /api/reports/{draft}/steps/{n}
//   POST   /api/reports/{draft}/finalize
//   GET    /api/shots/{address}

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "reprokit/error.hpp"
#include "reprokit/store.hpp"

namespace reprokit {

struct ServiceOptions {
  std::string cors_origin = "*";
  std::optional<std::filesystem::path> ui_root;  // static assets served at "/"
};

class Service {
 public:
  explicit Service(Store& store, ServiceOptions options = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds without serving. Port 0 picks a free port. Returns false when the
  /// address is unavailable.
  bool bind(const std::string& host, int port);
  int port() const noexcept;

  /// Serves until stop(). Requires a successful bind().
  bool run();
  void stop();
  /// Blocks until the server accepts connections (for tests).
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// HTTP status used for an error category.
int http_status(ErrorKind kind) noexcept;

}  // namespace reprokit
