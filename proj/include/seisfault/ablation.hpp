#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "seisfault/eval.hpp"
#include "seisfault/pipeline.hpp"

namespace seisfault {

// One section scored with and without the color path.
struct AblationRow {
  std::size_t t_index = 0;
  std::string label;
  DistanceReport full;
  DistanceReport ablated;
};

// `truth` must hold an entry for every requested section.
std::vector<AblationRow> run_ablation(const SeismicVolume& volume, std::span<const std::size_t> ts,
                                      const PipelineParams& params,
                                      std::span<const FaultGroundTruth> truth, unsigned workers = 0);

// Sections down the side, "Full" and "Ablated" symmetric means across.
std::string render_ablation_table(const std::vector<AblationRow>& rows);

const FaultGroundTruth& truth_for(std::span<const FaultGroundTruth> truth, std::size_t t);

}  // namespace seisfault
