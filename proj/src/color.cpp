#include "seisfault/color.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "seisfault/error.hpp"

namespace seisfault {

namespace {

void check_range(const Rgb& c) {
  const auto ok = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!ok(c.r) || !ok(c.g) || !ok(c.b)) {
    throw ValidationError("rgb components must lie in [0, 1]");
  }
}

double srgb_to_linear(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

constexpr double kXyz[3][3] = {{0.4124564, 0.3575761, 0.1804375},
                               {0.2126729, 0.7151522, 0.0721750},
                               {0.0193339, 0.1191920, 0.9503041}};

// D65 white as the image of sRGB white, so (1,1,1) lands exactly on L* = 100.
constexpr double kWhite[3] = {kXyz[0][0] + kXyz[0][1] + kXyz[0][2],
                              kXyz[1][0] + kXyz[1][1] + kXyz[1][2],
                              kXyz[2][0] + kXyz[2][1] + kXyz[2][2]};

double lab_f(double t) {
  constexpr double delta = 6.0 / 29.0;
  return t > delta * delta * delta ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

template <typename Fn>
ColorImage convert(const BlendedImage& image, ColorSpace space, Fn fn) {
  ColorImage out{image.t_index, space,
                 Grid<std::array<double, 3>>(image.pixels.nx(), image.pixels.ny())};
  for (std::size_t i = 0; i < image.pixels.size(); ++i) {
    out.pixels.values()[i] = fn(image.pixels.values()[i]);
  }
  return out;
}

}  // namespace

std::string_view channel_name(Channel c) {
  switch (c) {
    case Channel::L: return "L";
    case Channel::Y: return "Y";
    case Channel::V: return "V";
    case Channel::semblance: return "D";
  }
  return "?";
}

BlendedImage blend_rgb(const SemblanceMap& d_prev, const SemblanceMap& d_cur,
                       const SemblanceMap& d_next) {
  if (!d_prev.values.same_shape(d_cur.values) || !d_next.values.same_shape(d_cur.values)) {
    throw ValidationError("blend_rgb: semblance maps differ in dimensions");
  }
  BlendedImage out{d_cur.t_index, Grid<Rgb>(d_cur.values.nx(), d_cur.values.ny())};
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    out.pixels.values()[i] = {d_prev.values.values()[i], d_cur.values.values()[i],
                              d_next.values.values()[i]};
  }
  return out;
}

std::array<double, 3> rgb_to_hsv(const Rgb& c) {
  check_range(c);
  const double v = std::max({c.r, c.g, c.b});
  const double lo = std::min({c.r, c.g, c.b});
  const double chroma = v - lo;
  const double s = v > 0.0 ? chroma / v : 0.0;
  double h = 0.0;
  if (chroma > 0.0) {
    if (v == c.r) {
      h = 60.0 * std::fmod((c.g - c.b) / chroma + 6.0, 6.0);
    } else if (v == c.g) {
      h = 60.0 * ((c.b - c.r) / chroma + 2.0);
    } else {
      h = 60.0 * ((c.r - c.g) / chroma + 4.0);
    }
    if (h >= 360.0) h -= 360.0;
  }
  return {h, s, v};
}

std::array<double, 3> rgb_to_ycbcr(const Rgb& c) {
  check_range(c);
  // Same as 0.299 r + 0.587 g + 0.114 b, written so that r = g = b yields g exactly.
  const double y = c.g + 0.299 * (c.r - c.g) + 0.114 * (c.b - c.g);
  return {y, 0.5 + (c.b - y) / 1.772, 0.5 + (c.r - y) / 1.402};
}

std::array<double, 3> rgb_to_lab(const Rgb& c) {
  check_range(c);
  const double lin[3] = {srgb_to_linear(c.r), srgb_to_linear(c.g), srgb_to_linear(c.b)};
  double f[3];
  for (int i = 0; i < 3; ++i) {
    const double xyz = kXyz[i][0] * lin[0] + kXyz[i][1] * lin[1] + kXyz[i][2] * lin[2];
    f[i] = lab_f(xyz / kWhite[i]);
  }
  return {116.0 * f[1] - 16.0, 500.0 * (f[0] - f[1]), 200.0 * (f[1] - f[2])};
}

ColorImage rgb_to_hsv(const BlendedImage& image) {
  return convert(image, ColorSpace::hsv, [](const Rgb& c) { return rgb_to_hsv(c); });
}

ColorImage rgb_to_ycbcr(const BlendedImage& image) {
  return convert(image, ColorSpace::ycbcr, [](const Rgb& c) { return rgb_to_ycbcr(c); });
}

ColorImage rgb_to_lab(const BlendedImage& image) {
  return convert(image, ColorSpace::lab, [](const Rgb& c) { return rgb_to_lab(c); });
}

IntensityMap extract_intensity(const ColorImage& image, Channel channel) {
  std::size_t component = 0;
  double scale = 1.0;
  ColorSpace expected{};
  switch (channel) {
    case Channel::L: expected = ColorSpace::lab; component = 0; scale = 0.01; break;
    case Channel::Y: expected = ColorSpace::ycbcr; component = 0; break;
    case Channel::V: expected = ColorSpace::hsv; component = 2; break;
    case Channel::semblance:
      throw ValidationError("extract_intensity: semblance is not a color channel");
  }
  if (image.space != expected) {
    throw ValidationError("extract_intensity: channel " + std::string(channel_name(channel)) +
                          " does not belong to the given color space");
  }
  IntensityMap out{image.t_index, channel, ScalarGrid(image.pixels.nx(), image.pixels.ny())};
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values.values()[i] = std::clamp(image.pixels.values()[i][component] * scale, 0.0, 1.0);
  }
  return out;
}

IntensityMap intensity_from_semblance(const SemblanceMap& d) {
  IntensityMap out{d.t_index, Channel::semblance, d.values};
  for (double& v : out.values.values()) v = std::clamp(v, 0.0, 1.0);
  return out;
}

}  // namespace seisfault
