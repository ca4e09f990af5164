#include "seisfault/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "seisfault/error.hpp"

namespace seisfault {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

int total_throw(const SyntheticSpec& spec) {
  int sum = 0;
  for (const auto& f : spec.faults) sum += f.throw_samples;
  return sum;
}

std::vector<double> ricker(double peak_hz, double dt_s) {
  const double step = std::numbers::pi * peak_hz * dt_s;
  // Truncate where exp(-a) < 2e-9.
  const int half = static_cast<int>(std::ceil(std::sqrt(20.0) / step));
  std::vector<double> w(static_cast<std::size_t>(2 * half + 1));
  for (int k = -half; k <= half; ++k) {
    const double a = (step * k) * (step * k);
    w[static_cast<std::size_t>(k + half)] = (1.0 - 2.0 * a) * std::exp(-a);
  }
  return w;
}

struct Segment {
  double x0, y0, x1, y1;
};

// Liang-Barsky clip of the infinite line p + lambda*u to [0, nx-1] x [0, ny-1].
bool clip_line(double px, double py, double ux, double uy, double nx, double ny, Segment& out) {
  double lo = -1e300;
  double hi = 1e300;
  const auto clip_axis = [&](double p, double u, double max) {
    if (std::abs(u) < 1e-12) return p >= 0.0 && p <= max;
    double a = (0.0 - p) / u;
    double b = (max - p) / u;
    if (a > b) std::swap(a, b);
    lo = std::max(lo, a);
    hi = std::min(hi, b);
    return lo <= hi;
  };
  if (!clip_axis(px, ux, nx - 1.0) || !clip_axis(py, uy, ny - 1.0)) return false;
  out = {px + lo * ux, py + lo * uy, px + hi * ux, py + hi * uy};
  return true;
}

void rasterize(Pixel a, Pixel b, std::set<Pixel>& out) {
  int x = a.x;
  int y = a.y;
  const int dx = std::abs(b.x - a.x);
  const int dy = -std::abs(b.y - a.y);
  const int sx = a.x < b.x ? 1 : -1;
  const int sy = a.y < b.y ? 1 : -1;
  int err = dx + dy;
  while (true) {
    out.insert({x, y});
    if (x == b.x && y == b.y) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y += sy;
    }
  }
}

bool fault_trace(const FaultDescriptor& f, const VolumeHeader& g, std::size_t t, Segment& seg) {
  const double theta = f.strike_deg * kDegToRad;
  const double shift = (static_cast<double>(t) - (static_cast<double>(g.n_time) - 1.0) / 2.0) /
                       std::tan(f.dip_deg * kDegToRad);
  const double px = f.anchor_x + shift * std::cos(theta);
  const double py = f.anchor_y - shift * std::sin(theta);
  return clip_line(px, py, std::sin(theta), std::cos(theta), static_cast<double>(g.n_inline),
                   static_cast<double>(g.n_crossline), seg);
}

Pixel round_clamped(double x, double y, const VolumeHeader& g) {
  const auto clamp = [](double v, std::size_t n) {
    return static_cast<int>(std::clamp<long>(std::lround(v), 0, static_cast<long>(n) - 1));
  };
  return {clamp(x, g.n_inline), clamp(y, g.n_crossline)};
}

}  // namespace

void SyntheticSpec::validate() const {
  geometry.validate();
  if (layer_count < 1) throw ValidationError("layer_count must be >= 1");
  if (!(peak_frequency_hz > 0.0)) throw ValidationError("peak_frequency_hz must be > 0");
  if (!(noise_ratio >= 0.0 && noise_ratio < 1.0)) {
    throw ValidationError("noise_ratio must lie in [0, 1)");
  }
  for (std::size_t i = 0; i < faults.size(); ++i) {
    const auto& f = faults[i];
    const std::string tag = "fault " + std::to_string(i) + ": ";
    if (f.throw_samples < 1) throw ValidationError(tag + "throw_samples must be >= 1");
    if (!(f.dip_deg > 0.0 && f.dip_deg <= 90.0)) {
      throw ValidationError(tag + "degenerate geometry, dip_deg must lie in (0, 90]");
    }
    if (!std::isfinite(f.strike_deg) || !std::isfinite(f.anchor_x) || !std::isfinite(f.anchor_y)) {
      throw ValidationError(tag + "non-finite geometry");
    }
    if (geometry.n_inline < 2 || geometry.n_crossline < 2) {
      throw ValidationError(tag + "degenerate geometry, section must be at least 2x2");
    }
    bool visible = false;
    Segment seg{};
    for (std::size_t t = 0; t < geometry.n_time && !visible; ++t) {
      visible = fault_trace(f, geometry, t, seg);
    }
    if (!visible) throw ValidationError(tag + "fault plane lies entirely outside the grid");
  }
}

double fault_side_distance(const FaultDescriptor& f, const VolumeHeader& g, double t, double x,
                           double y) {
  const double theta = f.strike_deg * kDegToRad;
  const double shift = (t - (static_cast<double>(g.n_time) - 1.0) / 2.0) / std::tan(f.dip_deg * kDegToRad);
  return (x - f.anchor_x) * std::cos(theta) - (y - f.anchor_y) * std::sin(theta) - shift;
}

int synthetic_displacement(const SyntheticSpec& spec, std::size_t t, std::size_t x, std::size_t y) {
  int disp = 0;
  for (const auto& f : spec.faults) {
    if (fault_side_distance(f, spec.geometry, static_cast<double>(t), static_cast<double>(x),
                            static_cast<double>(y)) > 0.0) {
      disp += f.throw_samples;
    }
  }
  return disp;
}

BaseTrace synthetic_base_trace(const SyntheticSpec& spec) {
  const auto wavelet = ricker(spec.peak_frequency_hz, spec.geometry.dt_ms / 1000.0);
  const int half = static_cast<int>(wavelet.size() / 2);
  const int origin = total_throw(spec);
  const int length = origin + static_cast<int>(spec.geometry.n_time);

  // Reflectivity spans the output range plus the wavelet support on both sides.
  const int padded = length + 2 * half;
  std::vector<double> reflectivity(static_cast<std::size_t>(padded), 0.0);
  std::mt19937_64 rng(spec.reflectivity_seed);
  std::uniform_int_distribution<int> where(0, padded - 1);
  std::uniform_real_distribution<double> magnitude(0.2, 1.0);
  std::bernoulli_distribution negative(0.5);
  const int interfaces = std::min(spec.layer_count, padded);
  for (int placed = 0; placed < interfaces;) {
    const auto k = static_cast<std::size_t>(where(rng));
    if (reflectivity[k] != 0.0) continue;
    const double m = magnitude(rng);
    reflectivity[k] = negative(rng) ? -m : m;
    ++placed;
  }

  BaseTrace trace{std::vector<double>(static_cast<std::size_t>(length), 0.0), origin};
  for (int i = 0; i < length; ++i) {
    double acc = 0.0;
    for (int k = -half; k <= half; ++k) {
      acc += reflectivity[static_cast<std::size_t>(i + half - k)] * wavelet[static_cast<std::size_t>(k + half)];
    }
    trace.samples[static_cast<std::size_t>(i)] = acc;
  }
  return trace;
}

SyntheticModel generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const VolumeHeader& g = spec.geometry;
  const BaseTrace base = synthetic_base_trace(spec);

  std::vector<double> clean(g.sample_count());
  double energy = 0.0;
  std::size_t i = 0;
  for (std::size_t t = 0; t < g.n_time; ++t) {
    for (std::size_t x = 0; x < g.n_inline; ++x) {
      for (std::size_t y = 0; y < g.n_crossline; ++y, ++i) {
        const int tau = static_cast<int>(t) - synthetic_displacement(spec, t, x, y);
        clean[i] = base.at(tau);
        energy += clean[i] * clean[i];
      }
    }
  }

  std::vector<float> amplitude(clean.size());
  const double sigma = spec.noise_ratio * std::sqrt(energy / static_cast<double>(clean.size()));
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (std::size_t k = 0; k < clean.size(); ++k) {
    const double n = sigma > 0.0 ? sigma * noise(rng) : 0.0;
    amplitude[k] = static_cast<float>(clean[k] + n);
  }

  std::vector<FaultGroundTruth> truth;
  truth.reserve(g.n_time);
  for (std::size_t t = 0; t < g.n_time; ++t) {
    std::set<Pixel> pixels;
    for (const auto& f : spec.faults) {
      Segment seg{};
      if (!fault_trace(f, g, t, seg)) continue;
      rasterize(round_clamped(seg.x0, seg.y0, g), round_clamped(seg.x1, seg.y1, g), pixels);
    }
    truth.push_back({t, std::vector<Pixel>(pixels.begin(), pixels.end())});
  }

  return {SeismicVolume(g, std::move(amplitude)), std::move(truth)};
}

void to_json(nlohmann::json& j, const FaultDescriptor& f) {
  j = nlohmann::json{{"strike_deg", f.strike_deg},
                     {"dip_deg", f.dip_deg},
                     {"throw_samples", f.throw_samples},
                     {"anchor_x", f.anchor_x},
                     {"anchor_y", f.anchor_y}};
}

void from_json(const nlohmann::json& j, FaultDescriptor& f) {
  FaultDescriptor out;
  out.strike_deg = j.value("strike_deg", out.strike_deg);
  out.dip_deg = j.value("dip_deg", out.dip_deg);
  out.throw_samples = j.value("throw_samples", out.throw_samples);
  out.anchor_x = j.value("anchor_x", out.anchor_x);
  out.anchor_y = j.value("anchor_y", out.anchor_y);
  f = out;
}

void to_json(nlohmann::json& j, const SyntheticSpec& s) {
  j = nlohmann::json{{"geometry", s.geometry},
                     {"layer_count", s.layer_count},
                     {"reflectivity_seed", s.reflectivity_seed},
                     {"faults", s.faults},
                     {"peak_frequency_hz", s.peak_frequency_hz},
                     {"noise_ratio", s.noise_ratio},
                     {"seed", s.seed}};
}

void from_json(const nlohmann::json& j, SyntheticSpec& s) {
  if (!j.is_object()) throw ValidationError("synthetic spec must be a JSON object");
  SyntheticSpec out;
  try {
    if (j.contains("geometry")) out.geometry = j.at("geometry").get<VolumeHeader>();
    out.layer_count = j.value("layer_count", out.layer_count);
    out.reflectivity_seed = j.value("reflectivity_seed", out.reflectivity_seed);
    if (j.contains("faults")) out.faults = j.at("faults").get<std::vector<FaultDescriptor>>();
    out.peak_frequency_hz = j.value("peak_frequency_hz", out.peak_frequency_hz);
    out.noise_ratio = j.value("noise_ratio", out.noise_ratio);
    out.seed = j.value("seed", out.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("synthetic spec: ") + e.what());
  }
  s = out;
}

}  // namespace seisfault
