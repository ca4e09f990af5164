#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include "seisfault/attributes.hpp"
#include "seisfault/grid.hpp"

namespace seisfault {

struct Rgb {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// R, G, B = semblance of sections t-1, t, t+1.
struct BlendedImage {
  std::size_t t_index = 0;
  Grid<Rgb> pixels;
};

enum class ColorSpace { hsv, ycbcr, lab };

// Per-pixel triples in one color space: (h, s, v), (y, cb, cr) or (L*, a*, b*).
struct ColorImage {
  std::size_t t_index = 0;
  ColorSpace space = ColorSpace::hsv;
  Grid<std::array<double, 3>> pixels;
};

// L, Y, V are the intensity channels; semblance tags the single-map path
// used when the color path is disabled.
enum class Channel { L, Y, V, semblance };

std::string_view channel_name(Channel c);

struct IntensityMap {
  std::size_t t_index = 0;
  Channel channel = Channel::L;
  ScalarGrid values;  // in [0, 1]
};

BlendedImage blend_rgb(const SemblanceMap& d_prev, const SemblanceMap& d_cur,
                       const SemblanceMap& d_next);

// Hexcone HSV, h in [0, 360).
std::array<double, 3> rgb_to_hsv(const Rgb& c);
// BT.601 full range.
std::array<double, 3> rgb_to_ycbcr(const Rgb& c);
// sRGB-encoded input, D65 white, L* in [0, 100].
std::array<double, 3> rgb_to_lab(const Rgb& c);

ColorImage rgb_to_hsv(const BlendedImage& image);
ColorImage rgb_to_ycbcr(const BlendedImage& image);
ColorImage rgb_to_lab(const BlendedImage& image);

// L from Lab (divided by 100), Y from YCbCr, V from HSV.
IntensityMap extract_intensity(const ColorImage& image, Channel channel);

// Semblance values taken directly as an intensity map.
IntensityMap intensity_from_semblance(const SemblanceMap& d);

}  // namespace seisfault
