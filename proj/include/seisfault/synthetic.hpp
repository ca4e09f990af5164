#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"

#include "seisfault/volume.hpp"

namespace seisfault {

// A planar normal fault. The trace passes through (anchor_x, anchor_y) at the
// middle time sample; strike is measured from the crossline axis toward the
// inline axis, so strike 0 gives a trace of constant x. The plane moves along
// its map-view normal by cot(dip) pixels per time sample. Pixels on the
// positive-normal side are shifted down by throw_samples.
struct FaultDescriptor {
  double strike_deg = 0.0;
  double dip_deg = 90.0;
  int throw_samples = 4;
  double anchor_x = 0.0;
  double anchor_y = 0.0;
};

struct SyntheticSpec {
  VolumeHeader geometry;
  int layer_count = 48;
  std::uint64_t reflectivity_seed = 1;
  std::vector<FaultDescriptor> faults;
  double peak_frequency_hz = 30.0;
  double noise_ratio = 0.1;  // Gaussian noise std relative to signal RMS.
  std::uint64_t seed = 1;

  void validate() const;
};

struct SyntheticModel {
  SeismicVolume volume;
  std::vector<FaultGroundTruth> truth;  // one entry per time sample
};

// Noise-free reference trace before faulting: value(tau) for tau in
// [-origin, samples.size() - origin).
struct BaseTrace {
  std::vector<double> samples;
  int origin = 0;
  double at(int tau) const { return samples[static_cast<std::size_t>(tau + origin)]; }
};

BaseTrace synthetic_base_trace(const SyntheticSpec& spec);

// Signed map-view distance of pixel (x, y) at time t from the fault trace.
double fault_side_distance(const FaultDescriptor& fault, const VolumeHeader& geometry,
                           double t, double x, double y);

// Total downward shift in samples at (t, x, y) summed over all faults.
int synthetic_displacement(const SyntheticSpec& spec, std::size_t t, std::size_t x, std::size_t y);

SyntheticModel generate_synthetic(const SyntheticSpec& spec);

void to_json(nlohmann::json& j, const FaultDescriptor& f);
void from_json(const nlohmann::json& j, FaultDescriptor& f);
void to_json(nlohmann::json& j, const SyntheticSpec& s);
void from_json(const nlohmann::json& j, SyntheticSpec& s);

}  // namespace seisfault
