#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "seisfault/grid.hpp"

namespace seisfault {

// Container magic; files are "SVOL0001" + u32le header length + JSON header
// + float32le samples in [t][x][y] order.
inline constexpr std::string_view kVolumeMagic = "SVOL0001";

struct VolumeHeader {
  std::size_t n_time = 1;
  std::size_t n_inline = 1;
  std::size_t n_crossline = 1;
  double dt_ms = 4.0;
  double t0_ms = 0.0;
  int inline_origin = 0;
  int crossline_origin = 0;

  void validate() const;
  std::size_t sample_count() const { return n_time * n_inline * n_crossline; }
  double time_ms(std::size_t t) const { return t0_ms + dt_ms * static_cast<double>(t); }

  friend bool operator==(const VolumeHeader&, const VolumeHeader&) = default;
};

// Amplitude grid S(t, x, y), t slowest and crossline fastest. Immutable once built.
class SeismicVolume {
 public:
  SeismicVolume(VolumeHeader header, std::vector<float> amplitude);

  const VolumeHeader& header() const { return header_; }
  std::span<const float> amplitude() const { return amplitude_; }

  std::size_t index(std::size_t t, std::size_t x, std::size_t y) const {
    return (t * header_.n_inline + x) * header_.n_crossline + y;
  }
  float at(std::size_t t, std::size_t x, std::size_t y) const { return amplitude_[index(t, x, y)]; }

  friend bool operator==(const SeismicVolume&, const SeismicVolume&) = default;

 private:
  VolumeHeader header_;
  std::vector<float> amplitude_;
};

struct TimeSection {
  std::size_t t_index = 0;
  ScalarGrid values;
};

struct FaultGroundTruth {
  std::size_t t_index = 0;
  std::vector<Pixel> pixels;
};

SeismicVolume load_volume(const std::filesystem::path& path);
VolumeHeader read_volume_header(const std::filesystem::path& path);
void save_volume(const SeismicVolume& volume, const std::filesystem::path& path);

// Serialized container bytes, identical to what save_volume writes.
std::vector<unsigned char> encode_volume(const SeismicVolume& volume);
SeismicVolume decode_volume(std::span<const unsigned char> bytes);

void to_json(nlohmann::json& j, const VolumeHeader& h);
// Missing keys keep their defaults; the result is validated.
void from_json(const nlohmann::json& j, VolumeHeader& h);

TimeSection extract_time_section(const SeismicVolume& volume, std::size_t t);

std::vector<FaultGroundTruth> load_ground_truth(const std::filesystem::path& path);
void save_ground_truth(std::span<const FaultGroundTruth> truth, const std::filesystem::path& path);

}  // namespace seisfault
