#pragma once

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace reprokit {

/// Integer screen rectangle in pixels; right/bottom are exclusive edges.
struct Rect {
  int left = 0;
  int top = 0;
  int right = 0;
  int bottom = 0;

  int width() const noexcept { return right - left; }
  int height() const noexcept { return bottom - top; }
  bool valid() const noexcept { return left < right && top < bottom; }
  bool within(int w, int h) const noexcept {
    return left >= 0 && top >= 0 && right <= w && bottom <= h;
  }

  auto operator<=>(const Rect&) const = default;
};

struct ScreenDims {
  int width = 1200;
  int height = 1920;

  auto operator<=>(const ScreenDims&) const = default;
};

enum class GridRow { top, middle, bottom };
enum class GridColumn { left, center, right };

/// One of the nine relative-location cells ("Top Center", ...).
struct GridCell {
  GridRow row = GridRow::middle;
  GridColumn column = GridColumn::center;

  auto operator<=>(const GridCell&) const = default;

  static const std::array<GridCell, 9>& all();
};

std::string to_string(GridCell cell);
std::optional<GridCell> parse_grid_cell(std::string_view text);

/// Classifies the center of `bounds` into the 3x3 grid of equal thirds.
/// Intervals are half-open, [0, w/3), [w/3, 2w/3), [2w/3, w], so a center lying
/// exactly on a boundary belongs to the cell below/right of it.
/// Throws Error(invalid_geometry) for zero-area bounds or non-positive dims.
GridCell grid_cell(const Rect& bounds, const ScreenDims& dims);

/// Cell for a point given in doubled coordinates (2x, 2y), which keeps centers
/// of integer rectangles exact.
GridCell grid_cell_of_point2(long x2, long y2, const ScreenDims& dims);

}  // namespace reprokit
