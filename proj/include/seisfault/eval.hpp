#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "seisfault/enhance.hpp"
#include "seisfault/grid.hpp"
#include "seisfault/volume.hpp"

namespace seisfault {

// min(|x1 - x2|, |y1 - y2|). Not a metric: any shared row or column gives 0.
double point_distance(Pixel a, Pixel b);

// Means are absent when either set is empty.
struct DistanceReport {
  std::size_t t_index = 0;
  std::optional<double> mean_directed_det_to_gt;
  std::optional<double> mean_directed_gt_to_det;
  std::optional<double> mean_symmetric;
  // Supplementary Euclidean symmetric mean; not the score used for comparison.
  std::optional<double> mean_symmetric_euclidean;
  std::size_t detected_count = 0;
  std::size_t gt_count = 0;

  friend bool operator==(const DistanceReport&, const DistanceReport&) = default;
};

std::vector<Pixel> set_pixels(const BitGrid& mask);

DistanceReport average_distance(const BinaryMap& detected, const FaultGroundTruth& gt);
DistanceReport average_distance(std::span<const Pixel> detected, std::span<const Pixel> gt,
                                std::size_t t_index);

void to_json(nlohmann::json& j, const DistanceReport& r);
void from_json(const nlohmann::json& j, DistanceReport& r);

// Fixed 4-decimal layout with a header row; absent values print as "n/a".
struct TableRow {
  std::string label;
  std::vector<std::optional<double>> values;
};
std::string render_table(const std::string& corner, const std::vector<std::string>& columns,
                         const std::vector<TableRow>& rows);

// Fault-line export: {t_index, n_inline, n_crossline, components: [[[x, y], ...], ...]}.
// Each component is listed as a walk starting from an endpoint when it has one.
nlohmann::json lines_to_json(const BinaryMap& lines);
BinaryMap lines_from_json(const nlohmann::json& j);

// Section label used in tables, e.g. "1604ms".
std::string time_label(const VolumeHeader& header, std::size_t t);

}  // namespace seisfault
