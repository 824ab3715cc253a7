#include "reprokit/primer.hpp"

#include <expat.h>

#include <algorithm>
#include <charconv>
#include <exception>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "reprokit/error.hpp"
#include "reprokit/serialize.hpp"

namespace fs = std::filesystem;

namespace reprokit {

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io_error, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<Rect> parse_bounds(std::string_view text) {
  auto parts = split(text, ',');
  if (parts.size() != 4) return std::nullopt;
  int v[4];
  for (int i = 0; i < 4; ++i) {
    auto p = trim(parts[i]);
    auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), v[i]);
    if (ec != std::errc{} || ptr != p.data() + p.size()) return std::nullopt;
  }
  return Rect{v[0], v[1], v[2], v[3]};
}

struct XmlParserDeleter {
  void operator()(XML_Parser p) const { XML_ParserFree(p); }
};
using XmlParserPtr = std::unique_ptr<std::remove_pointer_t<XML_Parser>, XmlParserDeleter>;

class LayoutReader {
 public:
  LayoutReader(const std::string& path, const ScreenDims& dims)
      : path_(path), dims_(dims), parser_(XML_ParserCreate("UTF-8")) {
    XML_SetUserData(parser_.get(), this);
    XML_SetElementHandler(parser_.get(), &LayoutReader::on_start,
                          &LayoutReader::on_end);
    file_.path = path;
  }

  LayoutFile read(std::string_view xml) {
    const auto status = XML_Parse(parser_.get(), xml.data(),
                                  static_cast<int>(xml.size()), XML_TRUE);
    if (failure_) std::rethrow_exception(failure_);
    if (status != XML_STATUS_OK) {
      throw ParseError(path_, XML_GetCurrentLineNumber(parser_.get()),
                       XML_ErrorString(XML_GetErrorCode(parser_.get())));
    }
    if (!saw_root_) throw ParseError(path_, 1, "empty document");
    assign_object_indices(file_.components);
    return std::move(file_);
  }

 private:
  using Attrs = std::map<std::string, std::string, std::less<>>;

  static void XMLCALL on_start(void* self, const XML_Char* name,
                               const XML_Char** atts) {
    auto* r = static_cast<LayoutReader*>(self);
    if (r->failure_) return;
    try {
      Attrs attrs;
      for (int i = 0; atts[i]; i += 2) attrs.emplace(atts[i], atts[i + 1]);
      r->start(name, attrs);
    } catch (...) {
      r->failure_ = std::current_exception();
      XML_StopParser(r->parser_.get(), XML_FALSE);
    }
  }

  static void XMLCALL on_end(void* self, const XML_Char*) {
    auto* r = static_cast<LayoutReader*>(self);
    --r->depth_;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(path_, XML_GetCurrentLineNumber(parser_.get()), message);
  }

  std::string attr(const Attrs& attrs, std::string_view key) const {
    auto it = attrs.find(key);
    if (it == attrs.end() || it->second.empty()) {
      fail("missing attribute '" + std::string(key) + "'");
    }
    return it->second;
  }

  void start(std::string_view name, const Attrs& attrs) {
    ++depth_;
    if (depth_ == 1) {
      if (name != "layout" && name != "menu") {
        fail("root element must be <layout> or <menu>");
      }
      saw_root_ = true;
      file_.menu = name == "menu";
      file_.activity = attr(attrs, "activity");
      file_.window = attr(attrs, "window");
      return;
    }
    if (name == "group") return;

    ComponentDescriptor c;
    c.activity_name = file_.activity;
    c.window_id = file_.window;
    c.component_type = std::string(name);
    c.resource_id = attr(attrs, "id");
    if (!ids_.insert(c.resource_id).second) {
      throw Error(ErrorKind::duplicate_id,
                  path_ + ":" +
                      std::to_string(XML_GetCurrentLineNumber(parser_.get())) +
                      ": duplicate id '" + c.resource_id + "' in " +
                      file_.activity + "/" + file_.window);
    }
    if (auto it = attrs.find("text"); it != attrs.end()) c.text = it->second;
    auto bounds = parse_bounds(attr(attrs, "bounds"));
    if (!bounds || !bounds->valid()) fail("invalid bounds for '" + c.resource_id + "'");
    if (!bounds->within(dims_.width, dims_.height)) {
      fail("bounds of '" + c.resource_id + "' exceed the screen");
    }
    c.bounds = *bounds;
    c.relative_location = grid_cell(c.bounds, dims_);
    if (auto it = attrs.find("actions"); it != attrs.end()) {
      for (auto token : split(it->second, ',')) {
        token = trim(token);
        if (token.empty()) continue;
        auto kind = parse_action_kind(token);
        if (!kind) fail("unknown action '" + std::string(token) + "'");
        c.supported_actions.insert(*kind);
      }
    } else {
      c.supported_actions = default_actions(c.component_type);
    }
    file_.components.push_back(std::move(c));
  }

  std::string path_;
  ScreenDims dims_;
  XmlParserPtr parser_;
  LayoutFile file_;
  std::set<std::string> ids_;
  int depth_ = 0;
  bool saw_root_ = false;
  std::exception_ptr failure_;
};

Manifest parse_manifest(const fs::path& path) {
  const auto doc = parse_document(read_file(path), "manifest.json");
  Manifest m;
  try {
    m.app_id = doc.at("app_id").get<std::string>();
    m.app_version = doc.at("app_version").get<std::string>();
    m.main_activity = doc.at("main_activity").get<std::string>();
    if (doc.contains("device")) {
      const auto& d = doc.at("device");
      m.device.name = d.value("name", m.device.name);
      m.device.dims.width = d.value("width", m.device.dims.width);
      m.device.dims.height = d.value("height", m.device.dims.height);
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::bundle_malformed,
                "manifest.json: " + std::string(e.what()));
  }
  if (m.app_id.empty() || m.app_version.empty() || m.main_activity.empty()) {
    throw Error(ErrorKind::bundle_malformed,
                "manifest.json: app_id, app_version and main_activity are required");
  }
  if (m.device.dims.width <= 0 || m.device.dims.height <= 0) {
    throw Error(ErrorKind::bundle_malformed, "manifest.json: device dims must be positive");
  }
  return m;
}

std::vector<fs::path> xml_files(const fs::path& dir) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".xml") {
      out.push_back(entry.path());
    }
  }
  return out;
}

}  // namespace

ActionSet default_actions(std::string_view component_type) {
  if (component_type == "EditText") return {ActionKind::click, ActionKind::type};
  if (component_type == "TextView") return {};
  return {ActionKind::click};
}

const LayoutFile* AppBundle::find_layout(const std::string& activity,
                                         const std::string& window) const {
  for (const auto& l : layouts) {
    if (l.activity == activity && l.window == window) return &l;
  }
  return nullptr;
}

const ComponentDescriptor* StaticAppModel::find(const ComponentKey& key) const {
  for (const auto& c : components) {
    if (c.key() == key) return &c;
  }
  return nullptr;
}

LayoutFile parse_layout(std::string_view xml, const std::string& path,
                        const ScreenDims& dims) {
  return LayoutReader(path, dims).read(xml);
}

AppBundle load_bundle(const fs::path& root) {
  if (!fs::is_directory(root)) {
    throw Error(ErrorKind::bundle_malformed, root.string() + " is not a directory");
  }
  const auto manifest_path = root / "manifest.json";
  if (!fs::is_regular_file(manifest_path)) {
    throw Error(ErrorKind::bundle_malformed, "missing manifest.json in " + root.string());
  }

  AppBundle bundle;
  bundle.root = root;
  bundle.manifest = parse_manifest(manifest_path);

  std::vector<std::pair<std::string, fs::path>> files;
  for (const char* sub : {"layouts", "menus"}) {
    for (auto& p : xml_files(root / sub)) {
      files.emplace_back(fs::relative(p, root).generic_string(), p);
    }
  }
  std::sort(files.begin(), files.end());
  std::set<std::pair<std::string, std::string>> windows;
  for (const auto& [rel, abs] : files) {
    auto layout = parse_layout(read_file(abs), rel, bundle.manifest.device.dims);
    const bool is_menu = rel.starts_with("menus/");
    if (layout.menu != is_menu) {
      throw Error(ErrorKind::bundle_malformed,
                  rel + ": <menu> documents belong in menus/, <layout> in layouts/");
    }
    if (!windows.emplace(layout.activity, layout.window).second) {
      throw Error(ErrorKind::bundle_malformed,
                  rel + ": window " + layout.activity + "/" + layout.window +
                      " declared twice");
    }
    bundle.layouts.push_back(std::move(layout));
  }

  const bool main_has_layout = std::any_of(
      bundle.layouts.begin(), bundle.layouts.end(), [&](const LayoutFile& l) {
        return !l.menu && l.activity == bundle.manifest.main_activity;
      });
  if (!main_has_layout) {
    throw Error(ErrorKind::bundle_malformed,
                "main activity '" + bundle.manifest.main_activity + "' has no layout");
  }

  const auto index_path = root / "sources" / "index.json";
  if (fs::is_regular_file(index_path)) {
    const auto doc = parse_document(read_file(index_path), "sources/index.json");
    try {
      bundle.sources = doc.get<std::map<std::string, std::vector<std::string>>>();
    } catch (const Json::exception& e) {
      throw Error(ErrorKind::bundle_malformed,
                  "sources/index.json: " + std::string(e.what()));
    }
  }

  const auto behavior_path = root / "behavior.model";
  if (fs::is_regular_file(behavior_path)) bundle.behavior_model = read_file(behavior_path);
  return bundle;
}

StaticAppModel build_static_model(const AppBundle& bundle) {
  StaticAppModel model;
  model.app_id = bundle.manifest.app_id;
  model.app_version = bundle.manifest.app_version;
  for (const auto& layout : bundle.layouts) {
    if (std::find(model.activities.begin(), model.activities.end(),
                  layout.activity) == model.activities.end()) {
      model.activities.push_back(layout.activity);
    }
    model.components.insert(model.components.end(), layout.components.begin(),
                            layout.components.end());
  }
  model.type_vocabulary = component_types(model);
  return model;
}

StaticAppModel parse_bundle(const fs::path& root) {
  return build_static_model(load_bundle(root));
}

LinkResult link_sources(StaticAppModel model, const AppBundle& bundle) {
  LinkResult result;
  for (auto& c : model.components) {
    auto it = bundle.sources.find(c.resource_id);
    c.source_units = it == bundle.sources.end() ? std::vector<std::string>{}
                                                : it->second;
  }
  for (const auto& [id, units] : bundle.sources) {
    const bool known = std::any_of(
        model.components.begin(), model.components.end(),
        [&](const ComponentDescriptor& c) { return c.resource_id == id; });
    if (!known) {
      result.warnings.push_back("sources index references unknown resource id '" +
                                id + "'");
    }
  }
  result.model = std::move(model);
  return result;
}

std::vector<std::string> component_types(const StaticAppModel& model) {
  std::set<std::string> types;
  for (const auto& c : model.components) types.insert(c.component_type);
  return {types.begin(), types.end()};
}

std::string serialize_static_model(const StaticAppModel& model) {
  return to_document(Json{{"format", "reprokit-static/1"},
                          {"app_id", model.app_id},
                          {"app_version", model.app_version},
                          {"activities", model.activities},
                          {"components", model.components},
                          {"type_vocabulary", model.type_vocabulary}});
}

StaticAppModel parse_static_model(std::string_view text, const std::string& origin) {
  const auto doc = parse_document(text, origin);
  StaticAppModel m;
  m.app_id = doc.at("app_id").get<std::string>();
  m.app_version = doc.at("app_version").get<std::string>();
  m.activities = doc.at("activities").get<std::vector<std::string>>();
  m.components = doc.at("components").get<std::vector<ComponentDescriptor>>();
  m.type_vocabulary = doc.at("type_vocabulary").get<std::vector<std::string>>();
  return m;
}

}  // namespace reprokit
