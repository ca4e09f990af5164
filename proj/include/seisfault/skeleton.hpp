#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "seisfault/attributes.hpp"
#include "seisfault/enhance.hpp"
#include "seisfault/grid.hpp"

namespace seisfault {

struct SkeletonPoint {
  int x = 0;
  int y = 0;
  double disk_radius = 0.0;  // pixels
  double k = 0.0;            // dimensional weight, arc length in pixels
  double g = 0.0;            // geological weight
  double w = 0.0;            // k * g
  friend bool operator==(const SkeletonPoint&, const SkeletonPoint&) = default;
};

enum class SkeletonStage { none, axis, dimensional, weighted };

struct WeightedSkeleton {
  std::size_t t_index = 0;
  std::size_t nx = 0;
  std::size_t ny = 0;
  SkeletonStage stage = SkeletonStage::none;
  std::vector<SkeletonPoint> points;  // raster order

  BitGrid mask() const;
  friend bool operator==(const WeightedSkeleton&, const WeightedSkeleton&) = default;
};

struct SkeletonParams {
  // Global weight threshold T_W; when unset the prune_percentile of the
  // section's weights is used.
  std::optional<double> prune_threshold;
  double prune_percentile = 60.0;
  int min_component = 10;
  int min_branch = 5;
  int geo_radius = 2;

  void validate() const;
  friend bool operator==(const SkeletonParams&, const SkeletonParams&) = default;
};

// Exact Euclidean distance from each foreground pixel to the nearest
// background pixel center; everything outside the grid counts as background.
ScalarGrid distance_transform(const BitGrid& mask);

// Discrete medial axis: foreground pixels whose maximal disk is not contained
// in the disk of any 8-neighbor. No thinning applied.
WeightedSkeleton medial_axis_points(const BinaryMap& b);

// medial_axis_points conditioned to 8-connected unit width.
WeightedSkeleton medial_axis(const BinaryMap& b);

// Removes topology-preserving redundant pixels: first breaks every filled
// 2x2 block, then strips simple non-endpoint pixels. Lower `priority` goes first.
void thin_mask(BitGrid& mask, const ScalarGrid* priority = nullptr);

// Background pixels (the one-pixel ring outside the grid included) that are
// 4-adjacent to foreground and lie within disk_radius + 0.5 of p.
std::vector<Pixel> disk_contacts(const BitGrid& mask, const SkeletonPoint& p);

// Longest angular gap between consecutive contacts times the radius;
// fewer than two contacts give the full circumference.
double longest_contact_arc(const std::vector<Pixel>& contacts, const SkeletonPoint& p);

WeightedSkeleton dimensional_weight(const WeightedSkeleton& sk, const BinaryMap& b);
WeightedSkeleton attach_geological_weight(const WeightedSkeleton& sk, const GeologicalWeightMap& g);

// Linear-interpolated percentile of the point weights (0 for an empty skeleton).
double weight_percentile(const WeightedSkeleton& sk, double percentile);

BinaryMap prune(const WeightedSkeleton& sk, double t_w);

// Drops 8-connected components below min_component pixels and endpoint-to-
// junction branches below min_branch pixels, re-thinning, until stable.
BinaryMap cleanup(const BinaryMap& b, int min_component, int min_branch);

// 8-connected components in raster order of their first pixel.
std::vector<std::vector<Pixel>> connected_components(const BitGrid& mask);

}  // namespace seisfault
