#include "seisfault/attributes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "seisfault/error.hpp"

namespace seisfault {

namespace {

// Number of in-bounds indices within radius r of i on an axis of length n.
std::size_t window_count(std::size_t i, std::size_t n, int r) {
  const long lo = std::max<long>(0, static_cast<long>(i) - r);
  const long hi = std::min<long>(static_cast<long>(n) - 1, static_cast<long>(i) + r);
  return static_cast<std::size_t>(hi - lo + 1);
}

}  // namespace

void SemblanceParams::validate() const {
  if (half_window_xy < 1) throw ValidationError("semblance half_window_xy must be >= 1");
  if (half_window_t < 0) throw ValidationError("semblance half_window_t must be >= 0");
  if (!(clamp_floor > 0.0 && clamp_floor < 1.0)) {
    throw ValidationError("semblance clamp_floor must lie in (0, 1)");
  }
}

ScalarGrid box_sum(const ScalarGrid& grid, int rx, int ry) {
  const std::size_t nx = grid.nx();
  const std::size_t ny = grid.ny();
  ScalarGrid rows(nx, ny);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      const std::size_t y0 = y >= static_cast<std::size_t>(ry) ? y - ry : 0;
      const std::size_t y1 = std::min(ny - 1, y + ry);
      double acc = 0.0;
      for (std::size_t k = y0; k <= y1; ++k) acc += grid(x, k);
      rows(x, y) = acc;
    }
  }
  ScalarGrid out(nx, ny);
  for (std::size_t x = 0; x < nx; ++x) {
    const std::size_t x0 = x >= static_cast<std::size_t>(rx) ? x - rx : 0;
    const std::size_t x1 = std::min(nx - 1, x + rx);
    for (std::size_t y = 0; y < ny; ++y) {
      double acc = 0.0;
      for (std::size_t k = x0; k <= x1; ++k) acc += rows(k, y);
      out(x, y) = acc;
    }
  }
  return out;
}

SemblanceMap semblance(const SeismicVolume& volume, std::size_t t, const SemblanceParams& params) {
  params.validate();
  const VolumeHeader& h = volume.header();
  if (t >= h.n_time) {
    throw ValidationError("semblance: time index " + std::to_string(t) + " out of range");
  }
  const std::size_t nx = h.n_inline;
  const std::size_t ny = h.n_crossline;
  const int w = params.half_window_xy;

  ScalarGrid numerator(nx, ny, 0.0);
  ScalarGrid energy(nx, ny, 0.0);
  const long t_lo = std::max<long>(0, static_cast<long>(t) - params.half_window_t);
  const long t_hi = std::min<long>(static_cast<long>(h.n_time) - 1, static_cast<long>(t) + params.half_window_t);
  for (long k = t_lo; k <= t_hi; ++k) {
    const TimeSection s = extract_time_section(volume, static_cast<std::size_t>(k));
    ScalarGrid squared = s.values;
    for (double& v : squared.values()) v *= v;
    const ScalarGrid stack = box_sum(s.values, w, w);
    const ScalarGrid power = box_sum(squared, w, w);
    for (std::size_t i = 0; i < numerator.size(); ++i) {
      numerator.values()[i] += stack.values()[i] * stack.values()[i];
      energy.values()[i] += power.values()[i];
    }
  }

  SemblanceMap out{t, ScalarGrid(nx, ny)};
  for (std::size_t x = 0; x < nx; ++x) {
    const std::size_t cx = window_count(x, nx, w);
    for (std::size_t y = 0; y < ny; ++y) {
      const double denom = static_cast<double>(cx * window_count(y, ny, w)) * energy(x, y);
      const double value = denom > 0.0 ? numerator(x, y) / denom : 1.0;
      out.values(x, y) = std::clamp(value, params.clamp_floor, 1.0);
    }
  }
  return out;
}

DiscontinuityMap discontinuity_map(const SemblanceMap& d_prev, const SemblanceMap& d_cur,
                                   const SemblanceMap& d_next, double clamp_floor) {
  if (!d_prev.values.same_shape(d_cur.values) || !d_next.values.same_shape(d_cur.values)) {
    throw ValidationError("discontinuity_map: semblance maps differ in dimensions");
  }
  if (!(clamp_floor > 0.0 && clamp_floor < 1.0)) {
    throw ValidationError("discontinuity_map: clamp_floor must lie in (0, 1)");
  }
  DiscontinuityMap out{d_cur.t_index, ScalarGrid(d_cur.values.nx(), d_cur.values.ny())};
  const auto discontinuity = [clamp_floor](double d) {
    return std::abs(std::log(std::max(d, clamp_floor)));
  };
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values.values()[i] = std::max({discontinuity(d_prev.values.values()[i]),
                                       discontinuity(d_cur.values.values()[i]),
                                       discontinuity(d_next.values.values()[i])});
  }
  return out;
}

GeologicalWeightMap geological_weight(const DiscontinuityMap& dhat, const TimeSection& section,
                                      int radius) {
  if (!dhat.values.same_shape(section.values)) {
    throw ValidationError("geological_weight: discontinuity map and section differ in dimensions");
  }
  if (radius < 0) throw ValidationError("geological_weight: radius must be >= 0");
  ScalarGrid power = section.values;
  for (double& v : power.values()) v *= v;
  ScalarGrid weighted = power;
  for (std::size_t i = 0; i < weighted.size(); ++i) weighted.values()[i] *= dhat.values.values()[i];

  const ScalarGrid num = box_sum(weighted, radius, radius);
  const ScalarGrid den = box_sum(power, radius, radius);
  GeologicalWeightMap out{dhat.t_index, ScalarGrid(dhat.values.nx(), dhat.values.ny()), radius};
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const double d = den.values()[i];
    out.values.values()[i] = d > 0.0 ? num.values()[i] / d : dhat.values.values()[i];
  }
  return out;
}

}  // namespace seisfault
