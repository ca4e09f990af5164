#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include "seisfault/color.hpp"
#include "seisfault/grid.hpp"

namespace seisfault {

// Images put inline (x) down the rows and crossline (y) across the columns.

inline constexpr std::array<std::uint8_t, 3> kAccent = {255, 40, 0};

// Grayscale; values are min-max normalized unless a fixed range is given.
std::vector<unsigned char> render_scalar_png(const ScalarGrid& grid,
                                             std::optional<std::pair<double, double>> range = {});
std::vector<unsigned char> render_rgb_png(const Grid<Rgb>& image);
std::vector<unsigned char> render_binary_png(const BitGrid& bits);

// Min-max normalized grayscale background with set line pixels in kAccent.
std::vector<unsigned char> render_overlay_png(const ScalarGrid& background, const BitGrid& lines);

void export_overlay(const ScalarGrid& background, const BitGrid& lines,
                    const std::filesystem::path& path);

}  // namespace seisfault
