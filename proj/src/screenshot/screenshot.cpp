#include "reprokit/screenshot.hpp"

#include <string>

#include "reprokit/error.hpp"
#include "reprokit/serialize.hpp"

namespace reprokit {

namespace {

constexpr int kFontSize = 24;

std::string num(int v) { return std::to_string(v); }

std::string rect_attrs(const Rect& r) {
  return "x=\"" + num(r.left) + "\" y=\"" + num(r.top) + "\" width=\"" +
         num(r.width()) + "\" height=\"" + num(r.height()) + "\"";
}

ScreenshotDoc seal(ScreenDims dims, Rect viewport, std::string body) {
  ScreenshotDoc doc;
  doc.dims = dims;
  doc.viewport = viewport;
  doc.body = std::move(body);
  doc.bytes =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
      num(viewport.width()) + "\" height=\"" + num(viewport.height()) +
      "\" viewBox=\"" + num(viewport.left) + " " + num(viewport.top) + " " +
      num(viewport.width()) + " " + num(viewport.height()) + "\">\n" + doc.body +
      "</svg>\n";
  doc.address = sha256_hex(doc.bytes);
  return doc;
}

void check_in_frame(const ScreenshotDoc& shot, const ComponentDescriptor& c) {
  if (!c.bounds.valid()) {
    throw Error(ErrorKind::invalid_geometry,
                "component " + to_string(c.key()) + " has zero-area bounds");
  }
  if (!c.bounds.within(shot.dims.width, shot.dims.height)) {
    throw Error(ErrorKind::invalid_geometry,
                "component " + to_string(c.key()) + " lies outside the screen");
  }
}

}  // namespace

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += ch;
    }
  }
  return out;
}

ScreenshotDoc render_screen(const ScreenState& state) {
  const auto& dims = state.screen_dims;
  const Rect screen{0, 0, dims.width, dims.height};
  std::string body = "<title>" + xml_escape(state.activity_name + " / " + state.window_id) +
                     "</title>\n";
  body += "<rect class=\"screen\" " + rect_attrs(screen) +
                     " fill=\"#ffffff\" stroke=\"#202020\" stroke-width=\"2\"/>\n";
  for (const auto& c : state.components) {
    const auto& b = c.bounds;
    const std::string label = c.text && !c.text->empty() ? *c.text : c.resource_id;
    body += "<g class=\"component\" data-key=\"" + xml_escape(to_string(c.key())) +
            "\" data-type=\"" + xml_escape(c.component_type) + "\">";
    body += "<rect " + rect_attrs(b) +
            " fill=\"#e8e8e8\" stroke=\"#606060\" stroke-width=\"1\"/>";
    body += "<text x=\"" + num(b.left + b.width() / 2) + "\" y=\"" +
            num(b.top + b.height() / 2 + kFontSize / 3) +
            "\" font-family=\"sans-serif\" font-size=\"" + num(kFontSize) +
            "\" text-anchor=\"middle\">" + xml_escape(label) + "</text>";
    body += "</g>\n";
  }
  return seal(dims, screen, std::move(body));
}

AugmentedShot augment(const ScreenshotDoc& shot,
                      const ComponentDescriptor& component) {
  check_in_frame(shot, component);
  std::string body = shot.body + "<rect class=\"highlight\" " +
                     rect_attrs(component.bounds) +
                     " fill=\"none\" stroke=\"#e53935\" stroke-width=\"" +
                     num(kHighlightStrokeWidth) + "\"/>\n";
  return AugmentedShot{seal(shot.dims, shot.viewport, std::move(body)),
                       component.key(), component.bounds};
}

ScreenshotDoc crop(const ScreenshotDoc& shot, const ComponentDescriptor& component) {
  check_in_frame(shot, component);
  return seal(shot.dims, component.bounds, shot.body);
}

}  // namespace reprokit
