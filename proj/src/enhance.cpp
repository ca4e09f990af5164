#include "seisfault/enhance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "seisfault/error.hpp"

namespace seisfault {

namespace {

long reflect(long i, long n) {
  const long period = 2 * n;
  long m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

void check_threshold(double t, const char* name) {
  if (!(t > 0.0 && t < 1.0)) throw ValidationError(std::string(name) + " must lie in (0, 1)");
}

std::vector<std::size_t> tile_bounds(std::size_t n, int tiles) {
  std::vector<std::size_t> b(static_cast<std::size_t>(tiles) + 1);
  for (int k = 0; k <= tiles; ++k) b[static_cast<std::size_t>(k)] = static_cast<std::size_t>(k) * n / tiles;
  return b;
}

// Locates the two tile centers around coordinate i and the blend weight.
struct Span {
  int lo;
  int hi;
  double w;
};

Span interpolation_span(std::size_t i, const std::vector<std::size_t>& bounds) {
  const int tiles = static_cast<int>(bounds.size()) - 1;
  const auto center = [&](int k) {
    return (static_cast<double>(bounds[k]) + static_cast<double>(bounds[k + 1]) - 1.0) / 2.0;
  };
  const double pos = static_cast<double>(i);
  if (pos <= center(0)) return {0, 0, 0.0};
  if (pos >= center(tiles - 1)) return {tiles - 1, tiles - 1, 0.0};
  int k = 0;
  while (k + 1 < tiles && center(k + 1) < pos) ++k;
  const double c0 = center(k);
  const double c1 = center(k + 1);
  return {k, k + 1, (pos - c0) / (c1 - c0)};
}

double lerp(double a, double b, double w) { return a + w * (b - a); }

}  // namespace

void EnhanceParams::validate() const {
  if (!(gaussian_sigma > 0.0)) throw ValidationError("gaussian_sigma must be > 0");
  if (gaussian_size < 1) throw ValidationError("gaussian_size must be >= 1");
  if (clahe_tiles < 1) throw ValidationError("clahe_tiles must be >= 1");
  if (!(clahe_clip >= 1.0)) throw ValidationError("clahe_clip must be >= 1");
  if (clahe_bins < 2) throw ValidationError("clahe_bins must be >= 2");
  check_threshold(t_l, "t_l");
  check_threshold(t_y, "t_y");
  check_threshold(t_v, "t_v");
  check_threshold(t_c, "t_c");
}

double EnhanceParams::threshold_for(Channel channel) const {
  switch (channel) {
    case Channel::L: return t_l;
    case Channel::Y: return t_y;
    case Channel::V: return t_v;
    case Channel::semblance: return t_l;
  }
  return t_l;
}

std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::b_l: return "B_L";
    case Provenance::b_y: return "B_Y";
    case Provenance::b_v: return "B_V";
    case Provenance::b_semblance: return "B_D";
    case Provenance::b_combined: return "B_combined";
    case Provenance::skeleton_pruned: return "skeleton_pruned";
    case Provenance::fault_lines: return "fault_lines";
  }
  return "?";
}

std::size_t BinaryMap::count() const {
  return static_cast<std::size_t>(std::count(bits.values().begin(), bits.values().end(), 1));
}

std::vector<double> gaussian_kernel(double sigma, int size) {
  if (!(sigma > 0.0)) throw ValidationError("gaussian_sigma must be > 0");
  if (size < 1) throw ValidationError("gaussian_size must be >= 1");
  const int lo = -(size / 2);
  std::vector<double> k(static_cast<std::size_t>(size * size));
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      const double di = lo + i;
      const double dj = lo + j;
      k[static_cast<std::size_t>(i * size + j)] = std::exp(-(di * di + dj * dj) / (2.0 * sigma * sigma));
    }
  }
  const double sum = std::accumulate(k.begin(), k.end(), 0.0);
  for (double& v : k) v /= sum;
  return k;
}

IntensityMap gaussian_smooth(const IntensityMap& map, double sigma, int size) {
  const auto kernel = gaussian_kernel(sigma, size);
  const int lo = -(size / 2);
  const long nx = static_cast<long>(map.values.nx());
  const long ny = static_cast<long>(map.values.ny());
  IntensityMap out{map.t_index, map.channel, ScalarGrid(map.values.nx(), map.values.ny())};
  for (long x = 0; x < nx; ++x) {
    for (long y = 0; y < ny; ++y) {
      double acc = 0.0;
      for (int i = 0; i < size; ++i) {
        const long sx = reflect(x + lo + i, nx);
        for (int j = 0; j < size; ++j) {
          acc += kernel[static_cast<std::size_t>(i * size + j)] * map.values(sx, reflect(y + lo + j, ny));
        }
      }
      out.values(x, y) = std::clamp(acc, 0.0, 1.0);
    }
  }
  return out;
}

std::size_t histogram_bin(double value, int bins) {
  const double scaled = std::floor(std::clamp(value, 0.0, 1.0) * bins);
  return std::min(static_cast<std::size_t>(bins - 1), static_cast<std::size_t>(scaled));
}

ClaheMappings clahe_mappings(const IntensityMap& map, int tiles, double clip, int bins) {
  if (tiles < 1) throw ValidationError("clahe_tiles must be >= 1");
  if (!(clip >= 1.0)) throw ValidationError("clahe_clip must be >= 1");
  if (bins < 2) throw ValidationError("clahe_bins must be >= 2");
  const std::size_t nx = map.values.nx();
  const std::size_t ny = map.values.ny();
  if (static_cast<std::size_t>(tiles) > nx || static_cast<std::size_t>(tiles) > ny) {
    throw ValidationError("clahe: " + std::to_string(tiles) + " tiles per axis exceed the " +
                          std::to_string(nx) + "x" + std::to_string(ny) + " section");
  }

  ClaheMappings m;
  m.tiles = tiles;
  m.bins = bins;
  m.x_bounds = tile_bounds(nx, tiles);
  m.y_bounds = tile_bounds(ny, tiles);
  m.luts.reserve(static_cast<std::size_t>(tiles * tiles));

  // Fractions of the tile population, so equal-shaped histograms of tiles with
  // different sizes produce identical mappings.
  const double limit = clip / bins;
  std::vector<double> hist(static_cast<std::size_t>(bins));
  for (int tx = 0; tx < tiles; ++tx) {
    for (int ty = 0; ty < tiles; ++ty) {
      std::fill(hist.begin(), hist.end(), 0.0);
      std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
      std::size_t population = 0;
      for (std::size_t x = m.x_bounds[tx]; x < m.x_bounds[tx + 1]; ++x) {
        for (std::size_t y = m.y_bounds[ty]; y < m.y_bounds[ty + 1]; ++y) {
          ++counts[histogram_bin(map.values(x, y), bins)];
          ++population;
        }
      }
      double excess = 0.0;
      for (std::size_t b = 0; b < hist.size(); ++b) {
        const double frac = static_cast<double>(counts[b]) / static_cast<double>(population);
        if (frac > limit) {
          excess += frac - limit;
          hist[b] = limit;
        } else {
          hist[b] = frac;
        }
      }
      const double share = excess / bins;
      std::vector<double> lut(static_cast<std::size_t>(bins));
      double cdf = 0.0;
      for (std::size_t b = 0; b < hist.size(); ++b) {
        cdf += hist[b] + share;
        lut[b] = std::min(cdf, 1.0);
      }
      lut.back() = 1.0;
      m.luts.push_back(std::move(lut));
    }
  }
  return m;
}

IntensityMap clahe(const IntensityMap& map, int tiles, double clip, int bins) {
  const ClaheMappings m = clahe_mappings(map, tiles, clip, bins);
  const std::size_t nx = map.values.nx();
  const std::size_t ny = map.values.ny();
  std::vector<Span> y_spans(ny);
  for (std::size_t y = 0; y < ny; ++y) y_spans[y] = interpolation_span(y, m.y_bounds);

  IntensityMap out{map.t_index, map.channel, ScalarGrid(nx, ny)};
  for (std::size_t x = 0; x < nx; ++x) {
    const Span sx = interpolation_span(x, m.x_bounds);
    for (std::size_t y = 0; y < ny; ++y) {
      const Span& sy = y_spans[y];
      const std::size_t b = histogram_bin(map.values(x, y), bins);
      const double top = lerp(m.lut(sx.lo, sy.lo)[b], m.lut(sx.lo, sy.hi)[b], sy.w);
      const double bottom = lerp(m.lut(sx.hi, sy.lo)[b], m.lut(sx.hi, sy.hi)[b], sy.w);
      out.values(x, y) = std::clamp(lerp(top, bottom, sx.w), 0.0, 1.0);
    }
  }
  return out;
}

BinaryMap threshold_channel(const IntensityMap& map, double threshold) {
  check_threshold(threshold, "threshold");
  Provenance tag = Provenance::b_l;
  switch (map.channel) {
    case Channel::L: tag = Provenance::b_l; break;
    case Channel::Y: tag = Provenance::b_y; break;
    case Channel::V: tag = Provenance::b_v; break;
    case Channel::semblance: tag = Provenance::b_semblance; break;
  }
  BinaryMap out{map.t_index, BitGrid(map.values.nx(), map.values.ny(), 0), tag};
  for (std::size_t i = 0; i < out.bits.size(); ++i) {
    out.bits.values()[i] = map.values.values()[i] < threshold ? 1 : 0;
  }
  return out;
}

BinaryMap combine_binary(const BinaryMap& b_l, const BinaryMap& b_y, const BinaryMap& b_v,
                         const SemblanceMap& d_cur, double t_c) {
  if (b_l.provenance != Provenance::b_l || b_y.provenance != Provenance::b_y ||
      b_v.provenance != Provenance::b_v) {
    throw ValidationError("combine_binary: inputs must be tagged B_L, B_Y, B_V");
  }
  if (!b_l.bits.same_shape(b_y.bits) || !b_l.bits.same_shape(b_v.bits) ||
      !b_l.bits.same_shape(d_cur.values)) {
    throw ValidationError("combine_binary: dimension mismatch");
  }
  BinaryMap out{d_cur.t_index, BitGrid(b_l.bits.nx(), b_l.bits.ny(), 0), Provenance::b_combined};
  for (std::size_t i = 0; i < out.bits.size(); ++i) {
    const int n = b_l.bits.values()[i] + b_y.bits.values()[i] + b_v.bits.values()[i];
    const bool gated = n >= 2 && d_cur.values.values()[i] <= t_c;
    out.bits.values()[i] = (gated || n == 1) ? 1 : 0;
  }
  return out;
}

}  // namespace seisfault
