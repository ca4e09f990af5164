#include "seisfault/ablation.hpp"

#include "seisfault/error.hpp"

namespace seisfault {

const FaultGroundTruth& truth_for(std::span<const FaultGroundTruth> truth, std::size_t t) {
  for (const auto& gt : truth) {
    if (gt.t_index == t) return gt;
  }
  throw ValidationError("no ground truth for time index " + std::to_string(t));
}

std::vector<AblationRow> run_ablation(const SeismicVolume& volume, std::span<const std::size_t> ts,
                                      const PipelineParams& params,
                                      std::span<const FaultGroundTruth> truth, unsigned workers) {
  for (std::size_t t : ts) truth_for(truth, t);
  PipelineParams full = params;
  full.ablation = false;
  PipelineParams ablated = params;
  ablated.ablation = true;
  const auto full_runs = run_volume(volume, ts, full, workers);
  const auto ablated_runs = run_volume(volume, ts, ablated, workers);

  std::vector<AblationRow> rows;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    for (const auto* run : {&full_runs[i], &ablated_runs[i]}) {
      if (!run->result) throw StageError("ablation", run->error);
    }
    const FaultGroundTruth& gt = truth_for(truth, ts[i]);
    rows.push_back({ts[i], time_label(volume.header(), ts[i]),
                    average_distance(full_runs[i].result->fault_lines, gt),
                    average_distance(ablated_runs[i].result->fault_lines, gt)});
  }
  return rows;
}

std::string render_ablation_table(const std::vector<AblationRow>& rows) {
  std::vector<TableRow> table;
  for (const auto& r : rows) table.push_back({r.label, {r.full.mean_symmetric, r.ablated.mean_symmetric}});
  return render_table("Time Sections", {"Full", "Ablated"}, table);
}

}  // namespace seisfault
