#pragma once

#include <string>

#include "reprokit/model.hpp"

namespace reprokit {

/// An SVG 1.1 rendering of a screen. `viewport` is the visible region (the
/// whole screen unless cropped); `bytes` is the full document and `address`
/// its SHA-256 in lowercase hex.
struct ScreenshotDoc {
  ScreenDims dims;
  Rect viewport;
  std::string body;  // elements between the root tags
  std::string bytes;
  std::string address;

  bool operator==(const ScreenshotDoc&) const = default;
};

struct AugmentedShot {
  ScreenshotDoc doc;
  ComponentKey target;
  Rect highlight;

  bool operator==(const AugmentedShot&) const = default;
};

inline constexpr int kHighlightStrokeWidth = 6;

ScreenshotDoc render_screen(const ScreenState& state);

/// Adds one stroke-only highlight rectangle over the component's bounds.
/// Throws Error(invalid_geometry) when the bounds are degenerate or leave the
/// frame.
AugmentedShot augment(const ScreenshotDoc& shot,
                      const ComponentDescriptor& component);

/// Restricts the viewport to the component's bounds.
ScreenshotDoc crop(const ScreenshotDoc& shot, const ComponentDescriptor& component);

std::string xml_escape(std::string_view text);

}  // namespace reprokit
