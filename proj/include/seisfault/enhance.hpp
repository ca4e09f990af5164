#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "seisfault/attributes.hpp"
#include "seisfault/color.hpp"
#include "seisfault/grid.hpp"

namespace seisfault {

struct EnhanceParams {
  double gaussian_sigma = 10.0;
  int gaussian_size = 2;
  int clahe_tiles = 8;
  double clahe_clip = 2.0;
  int clahe_bins = 256;
  double t_l = 0.55;
  double t_y = 0.55;
  double t_v = 0.55;
  double t_c = 0.5;

  void validate() const;
  // T_L also serves the single-semblance chain.
  double threshold_for(Channel channel) const;
  friend bool operator==(const EnhanceParams&, const EnhanceParams&) = default;
};

enum class Provenance { b_l, b_y, b_v, b_semblance, b_combined, skeleton_pruned, fault_lines };

std::string_view provenance_name(Provenance p);

struct BinaryMap {
  std::size_t t_index = 0;
  BitGrid bits;
  Provenance provenance = Provenance::b_combined;

  std::size_t count() const;
  friend bool operator==(const BinaryMap&, const BinaryMap&) = default;
};

// Row-major size x size taps; offsets run from -(size/2) to size - 1 - size/2.
std::vector<double> gaussian_kernel(double sigma, int size);

// Half-sample symmetric padding at the borders; output clamped to [0, 1].
IntensityMap gaussian_smooth(const IntensityMap& map, double sigma, int size);

// Per-tile lookup tables of a contrast-limited equalization.
struct ClaheMappings {
  int tiles = 0;
  int bins = 0;
  std::vector<std::size_t> x_bounds;  // tiles + 1 entries
  std::vector<std::size_t> y_bounds;
  std::vector<std::vector<double>> luts;  // [tx * tiles + ty][bin], non-decreasing in [0, 1]

  const std::vector<double>& lut(int tx, int ty) const {
    return luts[static_cast<std::size_t>(tx * tiles + ty)];
  }
};

std::size_t histogram_bin(double value, int bins);

ClaheMappings clahe_mappings(const IntensityMap& map, int tiles, double clip, int bins);

// Bilinear blend of the tile mappings around each pixel.
IntensityMap clahe(const IntensityMap& map, int tiles, double clip, int bins);

// 1 where value < threshold.
BinaryMap threshold_channel(const IntensityMap& map, double threshold);

// n = bL + bY + bV; 1 when (n >= 2 and D <= t_c) or n == 1.
BinaryMap combine_binary(const BinaryMap& b_l, const BinaryMap& b_y, const BinaryMap& b_v,
                         const SemblanceMap& d_cur, double t_c);

}  // namespace seisfault
