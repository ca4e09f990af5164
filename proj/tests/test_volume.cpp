#include <cmath>
#include <cstring>
#include <limits>
#include <filesystem>
#include <numbers>
#include <set>

#include "doctest.h"
#include "json.hpp"

#include "seisfault/attributes.hpp"
#include "seisfault/error.hpp"
#include "seisfault/io.hpp"
#include "seisfault/synthetic.hpp"
#include "seisfault/volume.hpp"

using namespace seisfault;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("seisfault_vol_" + std::to_string(std::rand()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

SyntheticSpec small_spec() {
  SyntheticSpec s;
  s.geometry.n_time = 24;
  s.geometry.n_inline = 40;
  s.geometry.n_crossline = 32;
  s.faults = {{30.0, 80.0, 4, 20.0, 16.0}};
  s.seed = 3;
  return s;
}

// Little-endian container written out by hand.
std::vector<unsigned char> container(const std::string& header, const std::vector<float>& samples) {
  std::vector<unsigned char> out(kVolumeMagic.begin(), kVolumeMagic.end());
  const auto n = static_cast<std::uint32_t>(header.size());
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(n >> (8 * i)));
  out.insert(out.end(), header.begin(), header.end());
  for (float f : samples) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(bits >> (8 * i)));
  }
  return out;
}

const std::string kTinyHeader = R"({"n_time":1,"n_inline":2,"n_crossline":2})";

}  // namespace

TEST_CASE("minimal zero volume decodes") {
  const SeismicVolume v = decode_volume(container(kTinyHeader, {0, 0, 0, 0}));
  CHECK(v.header().n_time == 1);
  CHECK(v.header().n_inline == 2);
  for (float a : v.amplitude()) CHECK(a == 0.0f);
}

TEST_CASE("payload one sample short is a size mismatch") {
  CHECK_THROWS_AS(decode_volume(container(kTinyHeader, {0, 0, 0})), ValidationError);
  CHECK_THROWS_AS(decode_volume(container(kTinyHeader, {0, 0, 0, 0, 0})), ValidationError);
}

TEST_CASE("malformed containers are rejected") {
  auto bytes = container(kTinyHeader, {0, 0, 0, 0});
  bytes[0] = 'X';
  CHECK_THROWS_AS(decode_volume(bytes), ValidationError);
  CHECK_THROWS_AS(decode_volume(container("{not json", {})), ValidationError);
  CHECK_THROWS_AS(decode_volume(container(R"({"n_time":0,"n_inline":2,"n_crossline":2})", {})), ValidationError);
  const float nan = std::numeric_limits<float>::quiet_NaN();
  CHECK_THROWS_AS(decode_volume(container(kTinyHeader, {0, nan, 0, 0})), ValidationError);
}

TEST_CASE("header fields are stored little-endian after the magic") {
  const SeismicVolume v(VolumeHeader{1, 1, 2}, {1.0f, -2.0f});
  const auto bytes = encode_volume(v);
  CHECK(std::string(bytes.begin(), bytes.begin() + 8) == "SVOL0001");
  const std::uint32_t n = bytes[8] | bytes[9] << 8 | bytes[10] << 16 | bytes[11] << 24;
  const auto header = nlohmann::json::parse(std::string(bytes.begin() + 12, bytes.begin() + 12 + n));
  CHECK(header.at("n_crossline") == 2);
  CHECK(bytes.size() == 12 + n + 8);
  // 1.0f = 0x3f800000
  CHECK(bytes[12 + n + 3] == 0x3f);
  CHECK(bytes[12 + n + 2] == 0x80);
}

TEST_CASE("save and load round-trip bit for bit") {
  TempDir dir;
  const SyntheticModel m = generate_synthetic(small_spec());
  save_volume(m.volume, dir.path / "a.svol");
  save_volume(m.volume, dir.path / "b.svol");
  CHECK(read_file(dir.path / "a.svol") == read_file(dir.path / "b.svol"));
  const SeismicVolume back = load_volume(dir.path / "a.svol");
  CHECK(back == m.volume);
  CHECK(read_volume_header(dir.path / "a.svol") == m.volume.header());
  CHECK_THROWS_AS(load_volume(dir.path / "missing.svol"), IoError);
}

TEST_CASE("time sections are copies of one time slice") {
  VolumeHeader h{5, 3, 4};
  std::vector<float> a(h.sample_count());
  for (std::size_t t = 0; t < 5; ++t) {
    for (std::size_t i = 0; i < 12; ++i) a[t * 12 + i] = static_cast<float>(t);
  }
  const SeismicVolume v(h, a);
  TimeSection s = extract_time_section(v, 3);
  for (double x : s.values.values()) CHECK(x == 3.0);
  s.values(0, 0) = 99.0;
  CHECK(v.at(3, 0, 0) == 3.0f);
  CHECK(extract_time_section(v, 3).values == extract_time_section(v, 3).values);
  CHECK_THROWS_AS(extract_time_section(v, 5), ValidationError);
}

TEST_CASE("noise-free synthetic sections follow the shifted base trace") {
  SyntheticSpec s = small_spec();
  s.noise_ratio = 0.0;
  const SyntheticModel m = generate_synthetic(s);
  const BaseTrace base = synthetic_base_trace(s);
  const double theta = s.faults[0].strike_deg * std::numbers::pi / 180.0;
  const double cot = 1.0 / std::tan(s.faults[0].dip_deg * std::numbers::pi / 180.0);
  for (std::size_t t = 0; t < s.geometry.n_time; ++t) {
    for (std::size_t x = 0; x < s.geometry.n_inline; ++x) {
      for (std::size_t y = 0; y < s.geometry.n_crossline; ++y) {
        const double d = (x - 20.0) * std::cos(theta) - (y - 16.0) * std::sin(theta) -
                         (static_cast<double>(t) - 11.5) * cot;
        const int shift = d > 0.0 ? 4 : 0;
        CHECK(m.volume.at(t, x, y) == static_cast<float>(base.at(static_cast<int>(t) - shift)));
      }
    }
  }
}

TEST_CASE("without faults every section is laterally constant with unit semblance") {
  SyntheticSpec s;
  s.geometry = {12, 16, 10};
  s.noise_ratio = 0.0;
  const SyntheticModel m = generate_synthetic(s);
  for (std::size_t t = 0; t < 12; ++t) {
    const TimeSection sec = extract_time_section(m.volume, t);
    for (double v : sec.values.values()) CHECK(v == sec.values(0, 0));
    const SemblanceMap d = semblance(m.volume, t, {});
    for (double v : d.values.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.truth[t].pixels.empty());
  }
}

TEST_CASE("vertical fault parallel to the crossline gives the line x = 64") {
  SyntheticSpec s;
  s.geometry = {8, 128, 50};
  s.faults = {{0.0, 90.0, 3, 64.0, 10.0}};
  const SyntheticModel m = generate_synthetic(s);
  for (const auto& gt : m.truth) {
    REQUIRE(gt.pixels.size() == 50);
    for (std::size_t y = 0; y < 50; ++y) {
      CHECK(gt.pixels[y].x == 64);
      CHECK(gt.pixels[y].y == static_cast<int>(y));
    }
  }
}

TEST_CASE("generator is seeded and deterministic") {
  const SyntheticModel a = generate_synthetic(small_spec());
  const SyntheticModel b = generate_synthetic(small_spec());
  CHECK(a.volume == b.volume);
  REQUIRE(a.truth.size() == b.truth.size());
  for (std::size_t t = 0; t < a.truth.size(); ++t) CHECK(a.truth[t].pixels == b.truth[t].pixels);
  SyntheticSpec other = small_spec();
  other.seed = 4;
  CHECK_FALSE(generate_synthetic(other).volume == a.volume);
}

TEST_CASE("ground truth lies in bounds and marks a real amplitude discontinuity") {
  SyntheticSpec s;
  s.geometry = {32, 64, 64};
  s.faults = {{35.0, 75.0, 5, 32.0, 30.0}};
  s.noise_ratio = 0.0;
  const SyntheticModel m = generate_synthetic(s);
  const double theta = 35.0 * std::numbers::pi / 180.0;
  const double nx = std::cos(theta), ny = -std::sin(theta);
  std::size_t total = 0, strong = 0;
  for (const auto& gt : m.truth) {
    std::set<Pixel> unique(gt.pixels.begin(), gt.pixels.end());
    CHECK(unique.size() == gt.pixels.size());
    for (const auto& p : gt.pixels) {
      CHECK((p.x >= 0 && p.x < 64 && p.y >= 0 && p.y < 64));
      // Two steps either side along the normal, and one more step out on the near side.
      const auto at = [&](double k) {
        return Pixel{static_cast<int>(std::lround(p.x + k * nx)), static_cast<int>(std::lround(p.y + k * ny))};
      };
      const Pixel a = at(-2), b = at(2), a2 = at(-3);
      const auto inside = [](Pixel q) { return q.x >= 0 && q.x < 64 && q.y >= 0 && q.y < 64; };
      if (!inside(a) || !inside(b) || !inside(a2)) continue;
      ++total;
      const double across = std::abs(m.volume.at(gt.t_index, a.x, a.y) - m.volume.at(gt.t_index, b.x, b.y));
      const double within = std::abs(m.volume.at(gt.t_index, a.x, a.y) - m.volume.at(gt.t_index, a2.x, a2.y));
      if (across > 5.0 * within && across > 0.0) ++strong;
    }
  }
  REQUIRE(total > 100);
  CHECK(static_cast<double>(strong) / static_cast<double>(total) >= 0.8);
}

TEST_CASE("synthetic spec validation") {
  SyntheticSpec s = small_spec();
  s.faults[0].throw_samples = 0;
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s = small_spec();
  s.noise_ratio = 1.0;
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s = small_spec();
  s.faults[0].dip_deg = 0.0;
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s = small_spec();
  s.faults[0] = {0.0, 90.0, 2, 500.0, 10.0};
  CHECK_THROWS_AS(s.validate(), ValidationError);
  CHECK_NOTHROW(small_spec().validate());
}

TEST_CASE("spec and truth serialize losslessly") {
  TempDir dir;
  const SyntheticSpec s = small_spec();
  const SyntheticSpec back = nlohmann::json(s).get<SyntheticSpec>();
  CHECK(generate_synthetic(back).volume == generate_synthetic(s).volume);
  const SyntheticModel m = generate_synthetic(s);
  save_ground_truth(m.truth, dir.path / "t.json");
  const auto truth = load_ground_truth(dir.path / "t.json");
  REQUIRE(truth.size() == m.truth.size());
  for (std::size_t t = 0; t < truth.size(); ++t) CHECK(truth[t].pixels == m.truth[t].pixels);
}
