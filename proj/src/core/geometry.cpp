#include "reprokit/geometry.hpp"

#include "reprokit/error.hpp"

namespace reprokit {

namespace {

constexpr std::array<std::string_view, 3> kRowNames = {"Top", "Middle",
                                                        "Bottom"};
constexpr std::array<std::string_view, 3> kColumnNames = {"Left", "Center",
                                                           "Right"};

// Index of the third containing coordinate v2/2 on an axis of `extent` pixels.
int third(long v2, long extent) {
  // v < extent/3  <=>  3*v2 < 2*extent
  if (3 * v2 < 2 * extent) return 0;
  if (3 * v2 < 4 * extent) return 1;
  return 2;
}

}  // namespace

const std::array<GridCell, 9>& GridCell::all() {
  static const std::array<GridCell, 9> cells = [] {
    std::array<GridCell, 9> out{};
    std::size_t i = 0;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        out[i++] = GridCell{static_cast<GridRow>(r), static_cast<GridColumn>(c)};
    return out;
  }();
  return cells;
}

std::string to_string(GridCell cell) {
  std::string out{kRowNames[static_cast<int>(cell.row)]};
  out += ' ';
  out += kColumnNames[static_cast<int>(cell.column)];
  return out;
}

std::optional<GridCell> parse_grid_cell(std::string_view text) {
  for (const auto& cell : GridCell::all()) {
    if (to_string(cell) == text) return cell;
  }
  return std::nullopt;
}

GridCell grid_cell_of_point2(long x2, long y2, const ScreenDims& dims) {
  if (dims.width <= 0 || dims.height <= 0) {
    throw Error(ErrorKind::invalid_geometry, "screen dimensions must be positive");
  }
  return GridCell{static_cast<GridRow>(third(y2, dims.height)),
                  static_cast<GridColumn>(third(x2, dims.width))};
}

GridCell grid_cell(const Rect& bounds, const ScreenDims& dims) {
  if (!bounds.valid()) {
    throw Error(ErrorKind::invalid_geometry,
                "degenerate bounds [" + std::to_string(bounds.left) + "," +
                    std::to_string(bounds.top) + "][" +
                    std::to_string(bounds.right) + "," +
                    std::to_string(bounds.bottom) + "]");
  }
  return grid_cell_of_point2(static_cast<long>(bounds.left) + bounds.right,
                             static_cast<long>(bounds.top) + bounds.bottom,
                             dims);
}

}  // namespace reprokit
