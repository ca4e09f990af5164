#pragma once

#include <cstddef>

#include "seisfault/grid.hpp"
#include "seisfault/volume.hpp"

namespace seisfault {

// Energy-ratio semblance over a (2*half_window_xy+1)^2 lateral window and
// 2*half_window_t+1 samples, truncated at the volume edges.
struct SemblanceParams {
  int half_window_xy = 1;
  int half_window_t = 2;
  double clamp_floor = 1e-6;

  void validate() const;
  friend bool operator==(const SemblanceParams&, const SemblanceParams&) = default;
};

// Values in [clamp_floor, 1]; low means discontinuous.
struct SemblanceMap {
  std::size_t t_index = 0;
  ScalarGrid values;
};

// Largest |ln D| over three neighboring sections.
struct DiscontinuityMap {
  std::size_t t_index = 0;
  ScalarGrid values;
};

// Amplitude-power-weighted average of the discontinuity map.
struct GeologicalWeightMap {
  std::size_t t_index = 0;
  ScalarGrid values;
  int radius = 0;
};

SemblanceMap semblance(const SeismicVolume& volume, std::size_t t, const SemblanceParams& params);

// Pass d_cur for a neighbor that falls outside the volume.
DiscontinuityMap discontinuity_map(const SemblanceMap& d_prev, const SemblanceMap& d_cur,
                                   const SemblanceMap& d_next, double clamp_floor = 1e-6);

GeologicalWeightMap geological_weight(const DiscontinuityMap& dhat, const TimeSection& section,
                                      int radius);

// Sum over the truncated (2*rx+1) x (2*ry+1) window around every cell.
ScalarGrid box_sum(const ScalarGrid& grid, int rx, int ry);

}  // namespace seisfault
