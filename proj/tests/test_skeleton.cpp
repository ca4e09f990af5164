#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "doctest.h"

#include "oracles.hpp"
#include "seisfault/attributes.hpp"
#include "seisfault/error.hpp"
#include "seisfault/skeleton.hpp"

using namespace seisfault;

namespace {

BinaryMap map_from(const BitGrid& bits) { return BinaryMap{0, bits, Provenance::b_combined}; }

BitGrid rectangle(std::size_t nx, std::size_t ny, std::size_t x0, std::size_t y0, std::size_t w, std::size_t h) {
  BitGrid m(nx, ny, 0);
  for (std::size_t x = x0; x < x0 + w; ++x) {
    for (std::size_t y = y0; y < y0 + h; ++y) m(x, y) = 1;
  }
  return m;
}

WeightedSkeleton weighted(const BinaryMap& b, double g) {
  const WeightedSkeleton k = dimensional_weight(medial_axis(b), b);
  return attach_geological_weight(k, GeologicalWeightMap{0, ScalarGrid(b.bits.nx(), b.bits.ny(), g), 0});
}

BitGrid random_blob(std::mt19937_64& rng, std::size_t n, double fill) {
  std::bernoulli_distribution on(fill);
  BitGrid m(n, n, 0);
  for (auto& v : m.values()) v = on(rng);
  return m;
}

bool raw_contains_center(const BitGrid& m) {
  return medial_axis_points(map_from(m)).mask()(10, 10) == 1;
}

}  // namespace

TEST_CASE("distance transform agrees with exhaustive search") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const BitGrid m = random_blob(rng, 3 + trial % 10, 0.7);
    const ScalarGrid d = distance_transform(m);
    const ScalarGrid want = oracle::brute_distance(m);
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(d.values()[i] == doctest::Approx(want.values()[i]).epsilon(1e-12));
  }
}

TEST_CASE("a one-pixel line is its own skeleton") {
  BitGrid m(12, 9, 0);
  for (std::size_t y = 1; y < 8; ++y) m(5, y) = 1;
  CHECK(medial_axis(map_from(m)).mask() == m);
  BitGrid diag(10, 10, 0);
  for (std::size_t i = 0; i < 10; ++i) diag(i, i) = 1;
  CHECK(medial_axis(map_from(diag)).mask() == diag);
}

TEST_CASE("a filled disk peaks at its center") {
  BitGrid m(21, 21, 0);
  for (long x = 0; x < 21; ++x) {
    for (long y = 0; y < 21; ++y) m(x, y) = std::hypot(x - 10.0, y - 10.0) <= 5.0;
  }
  const WeightedSkeleton sk = medial_axis(map_from(m));
  REQUIRE_FALSE(sk.points.empty());
  // Boundary discretization leaves short spurs; the widest disk is the center.
  const auto widest = std::max_element(sk.points.begin(), sk.points.end(),
                                       [](const auto& a, const auto& b) { return a.disk_radius < b.disk_radius; });
  CHECK(widest->x == 10);
  CHECK(widest->y == 10);
  CHECK(widest->disk_radius > 5.0);
  CHECK(widest->disk_radius < 6.0);
  CHECK(raw_contains_center(m));
}

TEST_CASE("20x6 rectangle central segment matches the maximal-disk oracle") {
  const BitGrid m = rectangle(26, 12, 3, 3, 20, 6);
  const WeightedSkeleton raw = medial_axis_points(map_from(m));
  const BitGrid want = oracle::maximal_disk_centers(m);
  CHECK(raw.mask() == want);
  // Along the middle of the long axis the thinned skeleton is a single run.
  const BitGrid thin = medial_axis(map_from(m)).mask();
  for (std::size_t x = 7; x < 19; ++x) {
    int in_column = 0;
    for (std::size_t y = 0; y < 12; ++y) in_column += thin(x, y);
    CHECK(in_column == 1);
    CHECK((thin(x, 5) || thin(x, 6)));
  }
}

TEST_CASE("random small masks match the maximal-disk oracle") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    BitGrid m(6, 6, 0);
    std::vector<int> cells(36);
    std::iota(cells.begin(), cells.end(), 0);
    std::shuffle(cells.begin(), cells.end(), rng);
    const int n = 6 + trial % 7;
    for (int k = 0; k < n; ++k) m.values()[static_cast<std::size_t>(cells[k])] = 1;
    const WeightedSkeleton raw = medial_axis_points(map_from(m));
    CHECK(raw.mask() == oracle::maximal_disk_centers(m));
    const WeightedSkeleton thin = medial_axis(map_from(m));
    CHECK(oracle::subset(thin.mask(), raw.mask()));
    CHECK_FALSE(oracle::has_full_block(thin.mask()));
  }
}

TEST_CASE("recorded disks stay inside the foreground") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const BitGrid m = random_blob(rng, 10, 0.75);
    for (const auto& p : medial_axis(map_from(m)).points) {
      CHECK(p.disk_radius > 0.0);
      for (long x = -1; x <= 10; ++x) {
        for (long y = -1; y <= 10; ++y) {
          if (m.in_bounds(x, y) && m(x, y)) continue;
          CHECK(std::hypot(x - p.x, y - p.y) >= p.disk_radius - 1e-9);
        }
      }
    }
  }
}

TEST_CASE("skeleton is connected like the mask it came from") {
  const BitGrid m = rectangle(30, 30, 4, 4, 20, 7);
  BitGrid l = m;
  for (std::size_t x = 4; x < 11; ++x) {
    for (std::size_t y = 11; y < 26; ++y) l(x, y) = 1;
  }
  CHECK(connected_components(medial_axis(map_from(l)).mask()).size() == 1);
}

TEST_CASE("contact arcs match enumeration, and long bars give half circles") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const BinaryMap b = map_from(random_blob(rng, 12, 0.8));
    const WeightedSkeleton k = dimensional_weight(medial_axis(b), b);
    for (const auto& p : k.points) {
      CHECK(std::abs(p.k - oracle::contact_arc(b.bits, p.x, p.y, p.disk_radius)) <= 1.0);
      CHECK(p.k >= 0.0);
    }
  }
  // Mid-bar the contacts are the two opposite walls; the half-pixel reach
  // takes in floor(sqrt(r + 0.25)) extra wall pixels each way, which trims
  // the half circle by twice their angle.
  for (std::size_t width : {3, 5, 7, 9}) {
    const BinaryMap b = map_from(rectangle(60, 20, 2, 2, 50, width));
    const WeightedSkeleton k = dimensional_weight(medial_axis(b), b);
    int seen = 0;
    for (const auto& p : k.points) {
      if (p.x < 15 || p.x > 40) continue;
      ++seen;
      const double r = static_cast<double>((width + 1) / 2);
      REQUIRE(p.disk_radius == r);
      const double extra = std::floor(std::sqrt(r + 0.25));
      CHECK(p.k == doctest::Approx(r * (std::numbers::pi - 2.0 * std::atan(extra / r))).epsilon(1e-9));
      CHECK(p.k <= std::numbers::pi * r);
      CHECK(p.k >= 0.5 * std::numbers::pi * r);
    }
    CHECK(seen == 26);
  }
}

TEST_CASE("isolated points get the full circumference") {
  BitGrid m(5, 5, 0);
  m(2, 2) = 1;
  SkeletonPoint p{2, 2, 1.0};
  CHECK(longest_contact_arc({}, p) == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(longest_contact_arc({{3, 2}}, p) == doctest::Approx(2.0 * std::numbers::pi));
  // Only the four edge neighbors touch the pixel through an edge.
  CHECK(disk_contacts(m, p).size() == 4);
  CHECK(longest_contact_arc(disk_contacts(m, p), p) == doctest::Approx(std::numbers::pi / 2.0));
}

TEST_CASE("stage order is enforced") {
  const BinaryMap b = map_from(rectangle(10, 10, 2, 2, 5, 3));
  const WeightedSkeleton axis = medial_axis(b);
  CHECK_THROWS_AS(attach_geological_weight(axis, GeologicalWeightMap{0, ScalarGrid(10, 10, 1.0), 0}), ValidationError);
  CHECK_THROWS_AS(prune(axis, 0.0), ValidationError);
  CHECK_THROWS_AS(dimensional_weight(WeightedSkeleton{}, b), ValidationError);
}

TEST_CASE("W is the product of K and G") {
  std::mt19937_64 rng(5);
  const BinaryMap b = map_from(random_blob(rng, 16, 0.7));
  const WeightedSkeleton k = dimensional_weight(medial_axis(b), b);
  GeologicalWeightMap g{0, ScalarGrid(16, 16), 1};
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (double& v : g.values.values()) v = u(rng);
  g.values(k.points.front().x, k.points.front().y) = 0.0;
  const WeightedSkeleton w = attach_geological_weight(k, g);
  for (const auto& p : w.points) CHECK(p.w == p.k * g.values(p.x, p.y));
  CHECK(w.points.front().w == 0.0);
  for (const auto& p : weighted(b, 1.0).points) CHECK(p.w == p.k);
}

TEST_CASE("pruning is inclusive and antitone") {
  std::mt19937_64 rng(6);
  const BinaryMap b = map_from(random_blob(rng, 24, 0.6));
  const WeightedSkeleton k = dimensional_weight(medial_axis(b), b);
  GeologicalWeightMap g{0, ScalarGrid(24, 24), 1};
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (double& v : g.values.values()) v = u(rng);
  const WeightedSkeleton w = attach_geological_weight(k, g);
  CHECK(prune(w, 0.0).bits == w.mask());
  double max_w = 0.0;
  for (const auto& p : w.points) max_w = std::max(max_w, p.w);
  CHECK(prune(w, max_w * 1.0001 + 1e-12).count() == 0);
  const SkeletonPoint& pick = w.points[w.points.size() / 2];
  CHECK(prune(w, pick.w).bits(pick.x, pick.y) == 1);
  double last = -1.0;
  BitGrid previous = prune(w, 0.0).bits;
  for (double pct = 0; pct <= 100; pct += 10) {
    const double t = weight_percentile(w, pct);
    CHECK(t >= last);
    last = t;
    const BitGrid now = prune(w, t).bits;
    CHECK(oracle::subset(now, previous));
    previous = now;
  }
  CHECK(prune(w, 0.0).provenance == Provenance::skeleton_pruned);
}

TEST_CASE("percentile interpolates linearly") {
  WeightedSkeleton sk{0, 4, 1, SkeletonStage::weighted, {}};
  for (int i = 0; i < 4; ++i) sk.points.push_back({i, 0, 1.0, 1.0, 1.0, static_cast<double>(i * 10)});
  CHECK(weight_percentile(sk, 0) == 0.0);
  CHECK(weight_percentile(sk, 100) == 30.0);
  CHECK(weight_percentile(sk, 60) == doctest::Approx(18.0));
  CHECK(weight_percentile(WeightedSkeleton{}, 60) == 0.0);
}

TEST_CASE("cleanup drops short components and keeps long simple lines") {
  BitGrid m(20, 20, 0);
  for (std::size_t y = 2; y < 16; ++y) m(3, y) = 1;
  BitGrid noisy = m;
  noisy(10, 10) = 1;
  noisy(15, 2) = 1;
  const BinaryMap out = cleanup(map_from(noisy), 10, 5);
  CHECK(out.bits == m);
  CHECK(out.provenance == Provenance::fault_lines);
  BitGrid pair(20, 20, 0);
  pair(1, 1) = 1;
  pair(8, 8) = 1;
  CHECK(cleanup(map_from(pair), 10, 5).count() == 0);
}

TEST_CASE("cleanup removes a short T arm and keeps the bar") {
  BitGrid bar(16, 17, 0);
  for (std::size_t y = 0; y < 15; ++y) bar(5, y) = 1;
  BitGrid t = bar;
  for (std::size_t x = 6; x <= 8; ++x) t(x, 7) = 1;
  // Endpoint-to-junction paths, enumerated by hand: (5,0)..(5,6) and
  // (5,14)..(5,8) have 7 pixels each, the arm (8,7)..(6,7) has 3.
  CHECK(cleanup(map_from(t), 10, 5).bits == bar);
  BitGrid long_arm = bar;
  for (std::size_t x = 6; x <= 12; ++x) long_arm(x, 7) = 1;
  const BitGrid kept = cleanup(map_from(long_arm), 10, 5).bits;
  for (std::size_t x = 7; x <= 12; ++x) CHECK(kept(x, 7) == 1);
}

TEST_CASE("cleanup is idempotent and leaves no 2x2 block") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const BinaryMap b = map_from(random_blob(rng, 30, 0.35 + 0.01 * trial));
    const BinaryMap once = cleanup(prune(weighted(b, 1.0), 0.0), 10, 5);
    CHECK(cleanup(once, 10, 5).bits == once.bits);
    CHECK_FALSE(oracle::has_full_block(once.bits));
    CHECK(oracle::subset(once.bits, medial_axis(b).mask()));
  }
}

TEST_CASE("thinning breaks every 2x2 block") {
  BitGrid thick = rectangle(12, 12, 2, 2, 8, 2);
  thin_mask(thick);
  CHECK_FALSE(oracle::has_full_block(thick));
  CHECK(connected_components(thick).size() == 1);
  BitGrid block = rectangle(4, 4, 1, 1, 2, 2);
  thin_mask(block);
  CHECK_FALSE(oracle::has_full_block(block));
  CHECK(block.values().size() == 16);
}

TEST_CASE("empty foreground gives an empty skeleton") {
  const BinaryMap b = map_from(BitGrid(8, 8, 0));
  CHECK(medial_axis(b).points.empty());
  CHECK(cleanup(b, 10, 5).count() == 0);
  CHECK_THROWS_AS(cleanup(b, 0, 5), ValidationError);
}
