#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "seisfault/attributes.hpp"
#include "seisfault/color.hpp"
#include "seisfault/enhance.hpp"
#include "seisfault/error.hpp"
#include "seisfault/skeleton.hpp"
#include "seisfault/volume.hpp"

namespace seisfault {

struct PipelineParams {
  SemblanceParams semblance;
  EnhanceParams enhance;
  SkeletonParams skeleton;
  bool ablation = false;  // true: single-semblance chain, no color path

  void validate() const;
  friend bool operator==(const PipelineParams&, const PipelineParams&) = default;
};

// Full document with every key present.
nlohmann::json params_to_json(const PipelineParams& p);

// Merges a (possibly partial) document over `base`, rejects unknown keys and
// ill-typed values, and validates the result.
PipelineParams params_from_json(const nlohmann::json& patch, const PipelineParams& base = {});

// Applies "section.key=value" (value parsed as JSON) on top of `base`.
PipelineParams apply_override(const PipelineParams& base, const std::string& assignment);

struct StageTiming {
  std::string stage;
  double ms = 0.0;
};

struct PipelineResult {
  std::size_t t_index = 0;
  bool ablation = false;
  SemblanceMap semblance_prev;
  SemblanceMap semblance_cur;
  SemblanceMap semblance_next;
  std::optional<BlendedImage> blended;    // absent under ablation
  std::vector<IntensityMap> intensities;  // L, Y, V (or the semblance map)
  std::vector<IntensityMap> enhanced;     // after smoothing and CLAHE
  std::vector<BinaryMap> channel_binaries;
  BinaryMap combined;
  DiscontinuityMap discontinuity;
  GeologicalWeightMap geological;
  WeightedSkeleton skeleton;
  double prune_threshold = 0.0;
  BinaryMap pruned;
  BinaryMap fault_lines;
  std::vector<StageTiming> timings;  // execution order

  bool ran_stage(const std::string& name) const;
  std::vector<std::string> stage_names() const;
};

// Compares every field except timings.
bool same_outputs(const PipelineResult& a, const PipelineResult& b);

// semblance -> blend -> transform -> smooth -> CLAHE -> threshold -> combine
// -> weighted skeletonization -> cleanup, for one time section.
PipelineResult run_section(const SeismicVolume& volume, std::size_t t, const PipelineParams& params);

struct SectionOutcome {
  std::size_t t_index = 0;
  std::optional<PipelineResult> result;
  std::optional<ErrorKind> error_kind;
  std::string error;
};

// Sections run independently on `workers` threads (0 = hardware concurrency);
// outcomes come back in input order and failures do not stop the batch.
std::vector<SectionOutcome> run_volume(const SeismicVolume& volume, std::span<const std::size_t> ts,
                                       const PipelineParams& params, unsigned workers = 0);

}  // namespace seisfault
