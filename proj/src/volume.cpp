#include "seisfault/volume.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <set>
#include <string>

#include "seisfault/error.hpp"
#include "seisfault/io.hpp"

namespace seisfault {

namespace {

std::uint32_t read_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void append_u32le(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFFu));
}

struct HeaderBlock {
  VolumeHeader header;
  std::size_t payload_offset = 0;
};

HeaderBlock parse_header_block(std::span<const unsigned char> bytes) {
  const std::size_t magic_len = kVolumeMagic.size();
  if (bytes.size() < magic_len + 4 ||
      std::memcmp(bytes.data(), kVolumeMagic.data(), magic_len) != 0) {
    throw ValidationError("malformed header: missing SVOL0001 magic");
  }
  const std::uint32_t json_len = read_u32le(bytes.data() + magic_len);
  const std::size_t json_begin = magic_len + 4;
  if (bytes.size() - json_begin < json_len) {
    throw ValidationError("malformed header: truncated JSON header");
  }
  HeaderBlock block;
  try {
    const auto* first = reinterpret_cast<const char*>(bytes.data() + json_begin);
    const nlohmann::json j = nlohmann::json::parse(first, first + json_len);
    block.header = j.get<VolumeHeader>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed header: ") + e.what());
  }
  block.payload_offset = json_begin + json_len;
  return block;
}

}  // namespace

void VolumeHeader::validate() const {
  if (n_time < 1 || n_inline < 1 || n_crossline < 1) {
    throw ValidationError("volume dimensions must be >= 1");
  }
  if (!(dt_ms > 0.0) || !std::isfinite(dt_ms)) throw ValidationError("dt_ms must be > 0");
  if (!std::isfinite(t0_ms)) throw ValidationError("t0_ms must be finite");
}

void to_json(nlohmann::json& j, const VolumeHeader& h) {
  j = nlohmann::json{{"n_time", h.n_time},
                     {"n_inline", h.n_inline},
                     {"n_crossline", h.n_crossline},
                     {"dt_ms", h.dt_ms},
                     {"t0_ms", h.t0_ms},
                     {"inline_origin", h.inline_origin},
                     {"crossline_origin", h.crossline_origin}};
}

void from_json(const nlohmann::json& j, VolumeHeader& h) {
  if (!j.is_object()) throw ValidationError("volume header must be a JSON object");
  VolumeHeader out;
  out.n_time = j.value("n_time", out.n_time);
  out.n_inline = j.value("n_inline", out.n_inline);
  out.n_crossline = j.value("n_crossline", out.n_crossline);
  out.dt_ms = j.value("dt_ms", out.dt_ms);
  out.t0_ms = j.value("t0_ms", out.t0_ms);
  out.inline_origin = j.value("inline_origin", out.inline_origin);
  out.crossline_origin = j.value("crossline_origin", out.crossline_origin);
  out.validate();
  h = out;
}

SeismicVolume::SeismicVolume(VolumeHeader header, std::vector<float> amplitude)
    : header_(header), amplitude_(std::move(amplitude)) {
  header_.validate();
  if (amplitude_.size() != header_.sample_count()) {
    throw ValidationError("amplitude count " + std::to_string(amplitude_.size()) +
                          " does not match header " + std::to_string(header_.sample_count()));
  }
  for (std::size_t i = 0; i < amplitude_.size(); ++i) {
    if (!std::isfinite(amplitude_[i])) {
      throw ValidationError("non-finite sample at index " + std::to_string(i));
    }
  }
}

std::vector<unsigned char> encode_volume(const SeismicVolume& volume) {
  const std::string json = nlohmann::json(volume.header()).dump();
  std::vector<unsigned char> out;
  out.reserve(kVolumeMagic.size() + 4 + json.size() + 4 * volume.amplitude().size());
  out.insert(out.end(), kVolumeMagic.begin(), kVolumeMagic.end());
  append_u32le(out, static_cast<std::uint32_t>(json.size()));
  out.insert(out.end(), json.begin(), json.end());
  for (float v : volume.amplitude()) {
    append_u32le(out, std::bit_cast<std::uint32_t>(v));
  }
  return out;
}

SeismicVolume decode_volume(std::span<const unsigned char> bytes) {
  const HeaderBlock block = parse_header_block(bytes);
  const std::size_t expected = block.header.sample_count() * 4;
  const std::size_t actual = bytes.size() - block.payload_offset;
  if (actual != expected) {
    throw ValidationError("size mismatch: header implies " + std::to_string(expected) +
                          " payload bytes, file has " + std::to_string(actual));
  }
  std::vector<float> samples(block.header.sample_count());
  const unsigned char* p = bytes.data() + block.payload_offset;
  for (std::size_t i = 0; i < samples.size(); ++i, p += 4) {
    samples[i] = std::bit_cast<float>(read_u32le(p));
  }
  return SeismicVolume(block.header, std::move(samples));
}

SeismicVolume load_volume(const std::filesystem::path& path) {
  return decode_volume(read_file(path));
}

VolumeHeader read_volume_header(const std::filesystem::path& path) {
  return parse_header_block(read_file(path)).header;
}

void save_volume(const SeismicVolume& volume, const std::filesystem::path& path) {
  write_file(path, encode_volume(volume));
}

TimeSection extract_time_section(const SeismicVolume& volume, std::size_t t) {
  const VolumeHeader& h = volume.header();
  if (t >= h.n_time) {
    throw ValidationError("time index " + std::to_string(t) + " out of range [0, " +
                          std::to_string(h.n_time) + ")");
  }
  TimeSection section{t, ScalarGrid(h.n_inline, h.n_crossline)};
  const auto src = volume.amplitude().subspan(volume.index(t, 0, 0), h.n_inline * h.n_crossline);
  auto dst = section.values.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[i];
  return section;
}

std::vector<FaultGroundTruth> load_ground_truth(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("ground truth " + path.string() + ": " + e.what());
  }
  if (!j.is_array()) throw ValidationError("ground truth must be a JSON array");
  std::vector<FaultGroundTruth> truth;
  for (const auto& entry : j) {
    FaultGroundTruth gt;
    try {
      gt.t_index = entry.at("t_index").get<std::size_t>();
      std::set<Pixel> seen;
      for (const auto& px : entry.at("pixels")) {
        const Pixel p{px.at(0).get<int>(), px.at(1).get<int>()};
        if (seen.insert(p).second) gt.pixels.push_back(p);
      }
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("ground truth entry: ") + e.what());
    }
    truth.push_back(std::move(gt));
  }
  return truth;
}

void save_ground_truth(std::span<const FaultGroundTruth> truth, const std::filesystem::path& path) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& gt : truth) {
    nlohmann::json pixels = nlohmann::json::array();
    for (const auto& p : gt.pixels) pixels.push_back({p.x, p.y});
    j.push_back({{"t_index", gt.t_index}, {"pixels", std::move(pixels)}});
  }
  write_text_file(path, j.dump());
}

}  // namespace seisfault
