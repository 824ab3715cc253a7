#pragma once

// Static analysis of an app bundle directory:
//
//   <bundle>/manifest.json       app id/version, main activity, device profile
//   <bundle>/layouts/*.xml       one file per activity window
//   <bundle>/menus/*.xml         menus attached to an activity (same schema)
//   <bundle>/sources/index.json  resource id -> source-unit paths (optional)
//   <bundle>/behavior.model      transition table for the simulated device
//
// See docs/bundle-format.md for the layout schema.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reprokit/model.hpp"

namespace reprokit {

struct DeviceProfile {
  std::string name = "tablet-portrait";
  ScreenDims dims;

  bool operator==(const DeviceProfile&) const = default;
};

struct Manifest {
  std::string app_id;
  std::string app_version;
  std::string main_activity;
  DeviceProfile device;

  bool operator==(const Manifest&) const = default;
};

/// One parsed layout or menu file.
struct LayoutFile {
  std::string path;  // relative to the bundle root, '/' separated
  std::string activity;
  std::string window;
  bool menu = false;
  std::vector<ComponentDescriptor> components;  // document order
};

struct AppBundle {
  std::filesystem::path root;
  Manifest manifest;
  std::vector<LayoutFile> layouts;  // sorted by path
  std::map<std::string, std::vector<std::string>> sources;
  std::optional<std::string> behavior_model;  // raw text

  const LayoutFile* find_layout(const std::string& activity,
                                const std::string& window) const;
};

struct StaticAppModel {
  std::string app_id;
  std::string app_version;
  std::vector<std::string> activities;
  std::vector<ComponentDescriptor> components;
  std::vector<std::string> type_vocabulary;

  const ComponentDescriptor* find(const ComponentKey& key) const;

  bool operator==(const StaticAppModel&) const = default;
};

/// Reads and validates a bundle directory. Throws Error(bundle_malformed),
/// ParseError (XML syntax, with file and line) or Error(duplicate_id).
AppBundle load_bundle(const std::filesystem::path& root);

/// Parses one layout/menu document. `path` is used for diagnostics only.
LayoutFile parse_layout(std::string_view xml, const std::string& path,
                        const ScreenDims& dims);

StaticAppModel build_static_model(const AppBundle& bundle);

/// load_bundle + build_static_model.
StaticAppModel parse_bundle(const std::filesystem::path& root);

struct LinkResult {
  StaticAppModel model;
  std::vector<std::string> warnings;
};

/// Fills source_units from the bundle's sources index. Index entries naming
/// no declared component produce a warning, not an error.
LinkResult link_sources(StaticAppModel model, const AppBundle& bundle);

/// Sorted, deduplicated component types present in the model.
std::vector<std::string> component_types(const StaticAppModel& model);

/// Action set assumed when a layout element omits `actions`.
ActionSet default_actions(std::string_view component_type);

std::string serialize_static_model(const StaticAppModel& model);
StaticAppModel parse_static_model(std::string_view text,
                                  const std::string& origin = "static.model");

}  // namespace reprokit
