#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"

#include "oracles.hpp"
#include "seisfault/enhance.hpp"
#include "seisfault/error.hpp"

using namespace seisfault;

namespace {

IntensityMap random_map(std::mt19937_64& rng, std::size_t nx, std::size_t ny) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  IntensityMap m{0, Channel::L, ScalarGrid(nx, ny)};
  for (double& v : m.values.values()) v = u(rng);
  return m;
}

// Mirror index for half-sample symmetric extension: -1 -> 0, n -> n-1.
long mirror(long i, long n) {
  while (i < 0 || i >= n) i = i < 0 ? -i - 1 : 2 * n - i - 1;
  return i;
}

BinaryMap bits_of(std::initializer_list<int> v, std::size_t nx, std::size_t ny, Provenance p) {
  BinaryMap b{0, BitGrid(nx, ny), p};
  std::copy(v.begin(), v.end(), b.bits.values().begin());
  return b;
}

}  // namespace

TEST_CASE("gaussian kernel is normalized and symmetric about its offsets") {
  for (int size : {1, 2, 3, 4, 5}) {
    for (double sigma : {0.5, 1.0, 10.0}) {
      const auto k = gaussian_kernel(sigma, size);
      REQUIRE(k.size() == static_cast<std::size_t>(size * size));
      CHECK(std::abs(std::accumulate(k.begin(), k.end(), 0.0) - 1.0) <= 1e-12);
    }
  }
  const auto k3 = gaussian_kernel(1.0, 3);
  CHECK(k3[4] > k3[1]);
  CHECK(k3[0] == doctest::Approx(k3[8]));
  // Even sizes put the heavier tap at offset 0, i.e. index size/2.
  const auto k2 = gaussian_kernel(1.0, 2);
  CHECK(k2[3] > k2[0]);
  CHECK_THROWS_AS(gaussian_kernel(0.0, 2), ValidationError);
  CHECK_THROWS_AS(gaussian_kernel(1.0, 0), ValidationError);
}

TEST_CASE("2x2 smoothing of a 4x4 ramp matches direct convolution") {
  IntensityMap m{0, Channel::L, ScalarGrid(4, 4)};
  for (long x = 0; x < 4; ++x) {
    for (long y = 0; y < 4; ++y) m.values(x, y) = (x * 4 + y) / 15.0;
  }
  const IntensityMap s = gaussian_smooth(m, 10.0, 2);
  for (long x = 0; x < 4; ++x) {
    for (long y = 0; y < 4; ++y) {
      double num = 0.0, den = 0.0, avg = 0.0;
      for (long i = -1; i <= 0; ++i) {
        for (long j = -1; j <= 0; ++j) {
          const double w = std::exp(-(i * i + j * j) / 200.0);
          num += w * m.values(mirror(x + i, 4), mirror(y + j, 4));
          den += w;
          avg += 0.25 * m.values(mirror(x + i, 4), mirror(y + j, 4));
        }
      }
      CHECK(std::abs(s.values(x, y) - num / den) <= 1e-12);
      // At sigma = 10 the four taps differ by under 1%.
      CHECK(std::abs(s.values(x, y) - avg) <= 1e-2);
    }
  }
}

TEST_CASE("smoothing preserves constants, and a one-tap kernel is the identity") {
  std::mt19937_64 rng(1);
  const IntensityMap m = random_map(rng, 9, 7);
  CHECK(gaussian_smooth(m, 3.0, 1).values == m.values);
  IntensityMap c{0, Channel::Y, ScalarGrid(6, 6, 0.37)};
  const IntensityMap sc = gaussian_smooth(c, 2.0, 3);
  for (double v : sc.values.values()) CHECK(v == doctest::Approx(0.37).epsilon(1e-12));
  const IntensityMap sm = gaussian_smooth(m, 1.5, 4);
  for (double v : sm.values.values()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("clahe keeps uniform input uniform") {
  for (double v : {0.0, 0.3, 0.999, 1.0}) {
    IntensityMap m{0, Channel::V, ScalarGrid(40, 33, v)};
    const IntensityMap out = clahe(m, 8, 2.0, 256);
    for (double o : out.values.values()) CHECK(o == out.values(0, 0));
  }
}

TEST_CASE("clahe mappings are monotone, bounded and end at one") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const IntensityMap m = random_map(rng, 20 + trial, 31);
    const ClaheMappings maps = clahe_mappings(m, 1 + trial % 8, 1.0 + trial * 0.3, 2 + trial * 13);
    CHECK(maps.x_bounds.front() == 0);
    CHECK(maps.x_bounds.back() == m.values.nx());
    for (const auto& lut : maps.luts) {
      CHECK(std::is_sorted(lut.begin(), lut.end()));
      CHECK(lut.front() >= 0.0);
      CHECK(lut.back() == 1.0);
    }
    const IntensityMap out = clahe(m, 1 + trial % 8, 1.0 + trial * 0.3, 2 + trial * 13);
    for (double v : out.values.values()) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("single unclipped tile is global histogram equalization") {
  std::mt19937_64 rng(3);
  for (int bins : {2, 16, 256}) {
    const IntensityMap m = random_map(rng, 50, 37);
    const IntensityMap out = clahe(m, 1, static_cast<double>(bins), bins);
    const ScalarGrid want = oracle::global_equalization(m.values, bins);
    for (std::size_t i = 0; i < want.size(); ++i) {
      CHECK(std::abs(out.values.values()[i] - want.values()[i]) <= 1.0 / bins);
    }
  }
}

TEST_CASE("a permutation inside a single tile permutes the output") {
  std::mt19937_64 rng(4);
  const IntensityMap m = random_map(rng, 12, 10);
  std::vector<std::size_t> perm(m.values.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  IntensityMap p = m;
  for (std::size_t i = 0; i < perm.size(); ++i) p.values.values()[i] = m.values.values()[perm[i]];
  const IntensityMap a = clahe(m, 1, 2.0, 64);
  const IntensityMap b = clahe(p, 1, 2.0, 64);
  for (std::size_t i = 0; i < perm.size(); ++i) CHECK(b.values.values()[i] == a.values.values()[perm[i]]);
}

TEST_CASE("clahe rejects more tiles than pixels and bad parameters") {
  IntensityMap m{0, Channel::L, ScalarGrid(5, 20, 0.5)};
  CHECK_THROWS_AS(clahe(m, 8, 2.0, 256), ValidationError);
  CHECK_THROWS_AS(clahe(m, 2, 0.5, 256), ValidationError);
  CHECK_THROWS_AS(clahe(m, 2, 2.0, 1), ValidationError);
}

TEST_CASE("threshold is strict and tags by channel") {
  IntensityMap m{3, Channel::Y, ScalarGrid(1, 3)};
  m.values(0, 0) = 0.40;
  m.values(0, 1) = 0.55;
  m.values(0, 2) = 0.56;
  const BinaryMap b = threshold_channel(m, 0.55);
  CHECK(b.bits(0, 0) == 1);
  CHECK(b.bits(0, 1) == 0);
  CHECK(b.bits(0, 2) == 0);
  CHECK(b.provenance == Provenance::b_y);
  CHECK(b.t_index == 3);
  IntensityMap ones{0, Channel::L, ScalarGrid(4, 4, 1.0)};
  CHECK(threshold_channel(ones, 0.99).count() == 0);
  CHECK_THROWS_AS(threshold_channel(ones, 1.0), ValidationError);
  CHECK_THROWS_AS(threshold_channel(ones, 0.0), ValidationError);
}

TEST_CASE("threshold is monotone in T") {
  std::mt19937_64 rng(5);
  const IntensityMap m = random_map(rng, 30, 30);
  const BinaryMap lo = threshold_channel(m, 0.3);
  const BinaryMap hi = threshold_channel(m, 0.6);
  CHECK(oracle::subset(lo.bits, hi.bits));
}

TEST_CASE("combination rule over every channel pattern and gate side") {
  const double t_c = 0.5;
  for (int pattern = 0; pattern < 8; ++pattern) {
    for (double d : {0.1, 0.5, 0.5000001, 0.9}) {
      const BinaryMap l = bits_of({pattern & 1}, 1, 1, Provenance::b_l);
      const BinaryMap y = bits_of({(pattern >> 1) & 1}, 1, 1, Provenance::b_y);
      const BinaryMap v = bits_of({(pattern >> 2) & 1}, 1, 1, Provenance::b_v);
      const BinaryMap out = combine_binary(l, y, v, SemblanceMap{0, ScalarGrid(1, 1, d)}, t_c);
      const int n = (pattern & 1) + ((pattern >> 1) & 1) + ((pattern >> 2) & 1);
      CHECK(out.bits(0, 0) == oracle::combine_rule(n, d, t_c));
      CHECK(out.provenance == Provenance::b_combined);
    }
  }
  // Worked cases.
  const auto one = [](int l, int y, int v, double d) {
    return combine_binary(bits_of({l}, 1, 1, Provenance::b_l), bits_of({y}, 1, 1, Provenance::b_y),
                          bits_of({v}, 1, 1, Provenance::b_v), SemblanceMap{0, ScalarGrid(1, 1, d)}, 0.5)
        .bits(0, 0);
  };
  CHECK(one(1, 1, 0, 0.30) == 1);
  CHECK(one(1, 1, 1, 0.90) == 0);
  CHECK(one(0, 0, 1, 0.90) == 1);
  CHECK(one(0, 0, 0, 0.10) == 0);
}

TEST_CASE("combination rejects mislabeled or mismatched inputs") {
  const BinaryMap l = bits_of({1, 0}, 1, 2, Provenance::b_l);
  const BinaryMap y = bits_of({1, 0}, 1, 2, Provenance::b_y);
  const BinaryMap v = bits_of({1, 0}, 1, 2, Provenance::b_v);
  const SemblanceMap d{0, ScalarGrid(1, 2, 0.2)};
  CHECK_NOTHROW(combine_binary(l, y, v, d, 0.5));
  CHECK_THROWS_AS(combine_binary(y, l, v, d, 0.5), ValidationError);
  CHECK_THROWS_AS(combine_binary(l, y, v, SemblanceMap{0, ScalarGrid(2, 2, 0.2)}, 0.5), ValidationError);
  CHECK_THROWS_AS(combine_binary(l, y, bits_of({1}, 1, 1, Provenance::b_v), d, 0.5), ValidationError);
}

TEST_CASE("enhance parameter validation") {
  EnhanceParams p;
  CHECK_NOTHROW(p.validate());
  p.t_c = 1.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = {};
  p.clahe_clip = 0.9;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = {};
  p.gaussian_sigma = -1;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  CHECK(EnhanceParams{}.threshold_for(Channel::V) == 0.55);
}
