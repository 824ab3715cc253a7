#include "reprokit/service.hpp"

#include <httplib.h>

#include <map>
#include <mutex>

#include "reprokit/documents.hpp"
#include "reprokit/error.hpp"
#include "reprokit/suggestion.hpp"

namespace reprokit {

int http_status(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::not_found: return 404;
    case ErrorKind::conflict: return 409;
    case ErrorKind::unknown_format: return 400;
    case ErrorKind::validation:
    case ErrorKind::stale_suggestion:
    case ErrorKind::sequencing:
    case ErrorKind::invalid_action:
    case ErrorKind::invalid_geometry:
    case ErrorKind::parse_error:
    case ErrorKind::precondition:
      return 422;
    default:
      return 500;
  }
}

namespace {

constexpr const char* kJson = "application/json";

struct Reply {
  int status = 200;
  std::string body;
  std::string content_type = kJson;
};

Reply json_reply(int status, const Json& body) {
  return Reply{status, to_document(body), kJson};
}

Reply error_reply(const Error& e) {
  Json body{{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
  if (const auto* v = dynamic_cast<const ValidationError*>(&e)) {
    Json fields = Json::array();
    for (const auto& f : v->fields()) {
      fields.push_back(Json{{"field", f.field}, {"message", f.message}});
    }
    body["fields"] = std::move(fields);
  }
  return json_reply(http_status(e.kind()), body);
}

Json parse_body(const httplib::Request& req) {
  try {
    return parse_document(req.body, "request body");
  } catch (const ParseError& e) {
    throw ValidationError("body", e.what());
  }
}

std::string required_param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name) || req.get_param_value(name).empty()) {
    throw ValidationError(name, "query parameter is required");
  }
  return req.get_param_value(name);
}

ActionKind action_param(const httplib::Request& req) {
  const auto text = required_param(req, "action");
  auto kind = parse_action_kind(text);
  if (!kind) throw ValidationError("action", "unknown action '" + text + "'");
  return *kind;
}

}  // namespace

struct Service::Impl {
  Impl(Store& s, ServiceOptions o) : store(s), options(std::move(o)) {}

  Store& store;
  ServiceOptions options;
  httplib::Server server;
  int bound_port = -1;

  std::mutex locks_mutex;
  std::map<std::string, std::shared_ptr<std::mutex>> draft_locks;

  std::shared_ptr<std::mutex> lock_for(const std::string& draft_id) {
    std::lock_guard guard(locks_mutex);
    auto& slot = draft_locks[draft_id];
    if (!slot) slot = std::make_shared<std::mutex>();
    return slot;
  }

  // Runs a handler, translating errors and applying the idempotency token.
  void respond(const httplib::Request& req, httplib::Response& res,
               const std::function<Reply()>& handler, bool mutation) {
    std::string token_key;
    if (mutation && req.has_header("Idempotency-Key")) {
      token_key = req.method + " " + req.path + " " + req.get_header_value("Idempotency-Key");
      if (auto saved = store.recall_response(token_key)) {
        const auto doc = Json::parse(*saved);
        res.status = doc.at("status").get<int>();
        res.set_content(doc.at("body").get<std::string>(), kJson);
        res.set_header("Idempotent-Replay", "true");
        return;
      }
    }
    Reply reply;
    try {
      reply = handler();
    } catch (const Error& e) {
      reply = error_reply(e);
    } catch (const Json::exception& e) {
      reply = error_reply(ValidationError("body", e.what()));
    } catch (const std::exception& e) {
      reply = json_reply(500, Json{{"error", "internal"}, {"message", e.what()}});
    }
    if (!token_key.empty() && reply.status < 300) {
      store.remember_response(token_key,
                              Json{{"status", reply.status}, {"body", reply.body}}.dump());
    }
    res.status = reply.status;
    res.set_content(reply.body, reply.content_type);
  }

  struct Context {
    ReportDraft draft;
    EventFlowGraph graph;
  };

  Context load_context(const std::string& draft_id) {
    if (!store.has_draft(draft_id)) throw Error(ErrorKind::not_found, "no draft " + draft_id);
    auto draft = store.load_draft(draft_id);
    auto graph = store.load_graph({draft.app_id, draft.app_version});
    return {std::move(draft), std::move(graph)};
  }

  static Json draft_summary(const ReportDraft& draft) {
    Json j = draft;
    j.erase("format");
    return j;
  }

  Reply list_apps() {
    Json apps = Json::array();
    for (const auto& a : store.list_apps()) {
      apps.push_back(Json{{"app_id", a.app_id}, {"app_version", a.app_version}});
    }
    return json_reply(200, Json{{"apps", std::move(apps)}});
  }

  Reply create_draft(const httplib::Request& req) {
    const auto body = parse_body(req);
    std::vector<FieldError> problems;
    const auto app_id = body.value("app_id", "");
    const auto version = body.value("app_version", body.value("version", ""));
    if (app_id.empty()) problems.push_back({"app_id", "is required"});
    if (version.empty()) problems.push_back({"app_version", "is required"});
    if (body.contains("orientation") &&
        !parse_orientation(body.at("orientation").get<std::string>())) {
      problems.push_back({"orientation", "must be 'portrait' or 'landscape'"});
    }
    if (!problems.empty()) throw ValidationError(std::move(problems));
    if (!store.has_app({app_id, version})) {
      throw Error(ErrorKind::not_found, "app " + app_id + " " + version + " not analyzed");
    }
    const auto graph = store.load_graph({app_id, version});

    ReportDraft draft;
    draft.draft_id = store.next_draft_id();
    draft.app_id = app_id;
    draft.app_version = version;
    draft.header = body.get<ReportHeader>();
    draft.belief = initial_belief(graph);
    store.save_draft(draft);
    return json_reply(201, Json{{"draft_id", draft.draft_id}});
  }

  Reply get_report(const httplib::Request& req, const std::string& id) {
    if (store.has_report(id)) {
      const auto report = store.load_report(id);
      const auto format = req.has_param("format") ? req.get_param_value("format") : "structured";
      auto parsed = parse_render_format(format);
      if (!parsed) {
        throw Error(ErrorKind::unknown_format, "unknown report format '" + format + "'");
      }
      if (*parsed == RenderFormat::web_page) {
        return Reply{200, render(report, *parsed, "../shots/"), "text/html; charset=utf-8"};
      }
      return Reply{200, render(report, *parsed), kJson};
    }
    if (store.has_draft(id)) return json_reply(200, draft_summary(store.load_draft(id)));
    throw Error(ErrorKind::not_found, "no report or draft " + id);
  }

  Reply suggest(const httplib::Request& req, const std::string& draft_id) {
    auto ctx = load_context(draft_id);
    const AppRef app{ctx.draft.app_id, ctx.draft.app_version};
    const auto kind = required_param(req, "kind");
    if (kind == "actions") {
      Json actions = Json::array();
      for (auto k : suggest_actions(ctx.graph, ctx.draft.belief)) {
        actions.push_back(std::string(to_string(k)));
      }
      return json_reply(200, Json{{"actions", std::move(actions)}});
    }
    if (kind == "components") {
      Json list = Json::array();
      for (const auto& c : suggest_components(ctx.graph, ctx.draft.belief, action_param(req))) {
        store.put_shot(app, c.crop.bytes);
        list.push_back(Json{{"key", c.descriptor.key()},
                            {"type", c.descriptor.component_type},
                            {"text", c.descriptor.text ? Json(*c.descriptor.text) : Json()},
                            {"relative_location", c.descriptor.relative_location},
                            {"label", c.label},
                            {"crop", c.crop.address},
                            {"states", c.states}});
      }
      return json_reply(200, Json{{"components", std::move(list)}});
    }
    if (kind == "shots") {
      const auto key_text = required_param(req, "component");
      auto key = parse_component_key(key_text);
      if (!key) throw ValidationError("component", "malformed component key");
      Json list = Json::array();
      for (const auto& s :
           candidate_screenshots(ctx.graph, ctx.draft.belief, action_param(req), *key)) {
        store.put_shot(app, s.shot.doc.bytes);
        list.push_back(Json{{"address", s.shot.doc.address}, {"state", s.state}});
      }
      return json_reply(200, Json{{"shots", std::move(list)}});
    }
    if (kind == "vocabulary") {
      return json_reply(200, Json{{"types", manual_entry_vocabulary(store.load_static_model(app))}});
    }
    throw ValidationError("kind", "expected actions, components, shots or vocabulary");
  }

  Reply add_step(const httplib::Request& req, const std::string& draft_id) {
    auto guard = lock_for(draft_id);
    std::lock_guard lock(*guard);
    auto ctx = load_context(draft_id);
    auto body = parse_body(req);
    if (!body.contains("step_num")) body["step_num"] = ctx.draft.steps.size() + 1;
    auto draft = record_step(ctx.graph, std::move(ctx.draft), step_from_json(body));
    store.save_draft(draft);
    return json_reply(201, draft_summary(draft));
  }

  Reply remove_step(const std::string& draft_id, const std::string& step_text) {
    auto guard = lock_for(draft_id);
    std::lock_guard lock(*guard);
    auto ctx = load_context(draft_id);
    int step = 0;
    try {
      step = std::stoi(step_text);
    } catch (const std::exception&) {
      throw Error(ErrorKind::not_found, "no step " + step_text);
    }
    auto draft = delete_step(ctx.graph, std::move(ctx.draft), step);
    store.save_draft(draft);
    return json_reply(200, draft_summary(draft));
  }

  Reply finalize_draft(const std::string& draft_id) {
    auto guard = lock_for(draft_id);
    std::lock_guard lock(*guard);
    auto ctx = load_context(draft_id);
    if (ctx.draft.finalized_as) {
      throw Error(ErrorKind::conflict,
                  "draft " + draft_id + " already finalized as " + *ctx.draft.finalized_as);
    }
    const AppRef app{ctx.draft.app_id, ctx.draft.app_version};
    const auto static_model = store.load_static_model(app);
    // Validate before consuming an id.
    auto result = finalize(ctx.draft, ctx.graph, static_model, "pending", utc_timestamp_now());
    result.report.report_id = store.next_report_id(app.app_id);
    for (const auto& [address, bytes] : result.shots) store.put_shot(app, bytes);
    store.save_report(result.report);
    ctx.draft.finalized_as = result.report.report_id;
    store.save_draft(ctx.draft);
    return json_reply(201, Json{{"report_id", result.report.report_id}});
  }

  Reply get_shot(const std::string& address) {
    return Reply{200, store.get_shot(address), "image/svg+xml"};
  }

  void install_routes() {
    using Req = const httplib::Request&;
    using Res = httplib::Response&;

    server.Get("/api/apps", [this](Req req, Res res) {
      respond(req, res, [&] { return list_apps(); }, false);
    });
    server.Post("/api/reports", [this](Req req, Res res) {
      respond(req, res, [&] { return create_draft(req); }, true);
    });
    server.Get(R"(/api/reports/([^/]+))", [this](Req req, Res res) {
      respond(req, res, [&] { return get_report(req, req.matches[1]); }, false);
    });
    server.Get(R"(/api/reports/([^/]+)/suggest)", [this](Req req, Res res) {
      respond(req, res, [&] { return suggest(req, req.matches[1]); }, false);
    });
    server.Post(R"(/api/reports/([^/]+)/steps)", [this](Req req, Res res) {
      respond(req, res, [&] { return add_step(req, req.matches[1]); }, true);
    });
    server.Delete(R"(/api/reports/([^/]+)/steps/([^/]+))", [this](Req req, Res res) {
      respond(req, res, [&] { return remove_step(req.matches[1], req.matches[2]); }, true);
    });
    server.Post(R"(/api/reports/([^/]+)/finalize)", [this](Req req, Res res) {
      respond(req, res, [&] { return finalize_draft(req.matches[1]); }, true);
    });
    server.Get(R"(/api/shots/([^/]+))", [this](Req req, Res res) {
      respond(req, res, [&] { return get_shot(req.matches[1]); }, false);
    });
    server.Options(R"(/api/.*)", [](Req, Res res) { res.status = 204; });

    server.set_post_routing_handler([this](Req, Res res) {
      res.set_header("Access-Control-Allow-Origin", options.cors_origin);
      res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type, Idempotency-Key");
    });
    if (options.ui_root) server.set_mount_point("/", options.ui_root->string());
  }
};

Service::Service(Store& store, ServiceOptions options)
    : impl_(std::make_unique<Impl>(store, std::move(options))) {
  impl_->install_routes();
  // httplib's defaults add SO_REUSEPORT, which lets a second server share a
  // busy port silently. Keep only SO_REUSEADDR.
  impl_->server.set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  });
}

Service::~Service() { stop(); }

bool Service::bind(const std::string& host, int port) {
  if (port == 0) {
    impl_->bound_port = impl_->server.bind_to_any_port(host);
    return impl_->bound_port > 0;
  }
  if (!impl_->server.bind_to_port(host, port)) return false;
  impl_->bound_port = port;
  return true;
}

int Service::port() const noexcept { return impl_->bound_port; }

bool Service::run() {
  if (impl_->bound_port <= 0) return false;
  return impl_->server.listen_after_bind();
}

void Service::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace reprokit
