#include "seisfault/render.hpp"

#include <algorithm>
#include <cmath>

#include "seisfault/error.hpp"
#include "seisfault/io.hpp"
#include "seisfault/png.hpp"

namespace seisfault {

namespace {

std::uint8_t to_byte(double unit) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(unit, 0.0, 1.0) * 255.0));
}

std::vector<std::uint8_t> gray_levels(const ScalarGrid& grid, std::optional<std::pair<double, double>> range) {
  double lo = 0.0;
  double hi = 1.0;
  if (range) {
    std::tie(lo, hi) = *range;
  } else if (!grid.empty()) {
    const auto [mn, mx] = std::minmax_element(grid.values().begin(), grid.values().end());
    lo = *mn;
    hi = *mx;
  }
  std::vector<std::uint8_t> out(grid.size());
  const double span = hi - lo;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out[i] = span > 0.0 ? to_byte((grid.values()[i] - lo) / span) : 0;
  }
  return out;
}

}  // namespace

std::vector<unsigned char> render_scalar_png(const ScalarGrid& grid,
                                             std::optional<std::pair<double, double>> range) {
  return encode_png(grid.ny(), grid.nx(), 1, gray_levels(grid, range));
}

std::vector<unsigned char> render_rgb_png(const Grid<Rgb>& image) {
  std::vector<std::uint8_t> px;
  px.reserve(image.size() * 3);
  for (const auto& c : image.values()) {
    px.push_back(to_byte(c.r));
    px.push_back(to_byte(c.g));
    px.push_back(to_byte(c.b));
  }
  return encode_png(image.ny(), image.nx(), 3, px);
}

std::vector<unsigned char> render_binary_png(const BitGrid& bits) {
  std::vector<std::uint8_t> px(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) px[i] = bits.values()[i] ? 255 : 0;
  return encode_png(bits.ny(), bits.nx(), 1, px);
}

std::vector<unsigned char> render_overlay_png(const ScalarGrid& background, const BitGrid& lines) {
  if (!background.same_shape(lines)) {
    throw ValidationError("overlay: background and line map differ in dimensions");
  }
  const auto gray = gray_levels(background, std::nullopt);
  std::vector<std::uint8_t> px;
  px.reserve(gray.size() * 3);
  for (std::size_t i = 0; i < gray.size(); ++i) {
    if (lines.values()[i]) {
      px.insert(px.end(), kAccent.begin(), kAccent.end());
    } else {
      px.insert(px.end(), 3, gray[i]);
    }
  }
  return encode_png(background.ny(), background.nx(), 3, px);
}

void export_overlay(const ScalarGrid& background, const BitGrid& lines,
                    const std::filesystem::path& path) {
  write_file(path, render_overlay_png(background, lines));
}

}  // namespace seisfault
