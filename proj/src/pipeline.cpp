#include "seisfault/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <set>
#include <thread>

namespace seisfault {

namespace {

using json = nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ValidationError("params: " + where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ValidationError("params: unknown key " + where + "." + key);
  }
}

template <typename T>
T field(const json& obj, const char* key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError("params: " + where + "." + key + " is missing or has the wrong type");
  }
}

class StageClock {
 public:
  explicit StageClock(std::vector<StageTiming>& sink) : sink_(sink) {}

  template <typename Fn>
  auto operator()(const char* name, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    try {
      if constexpr (std::is_void_v<decltype(fn())>) {
        fn();
        record(name, start);
      } else {
        auto value = fn();
        record(name, start);
        return value;
      }
    } catch (const StageError&) {
      throw;
    } catch (const std::exception& e) {
      throw StageError(name, e.what());
    }
  }

 private:
  void record(const char* name, std::chrono::steady_clock::time_point start) {
    const std::chrono::duration<double, std::milli> dt = std::chrono::steady_clock::now() - start;
    sink_.push_back({name, dt.count()});
  }
  std::vector<StageTiming>& sink_;
};

bool same(const SemblanceMap& a, const SemblanceMap& b) { return a.t_index == b.t_index && a.values == b.values; }
bool same(const IntensityMap& a, const IntensityMap& b) {
  return a.t_index == b.t_index && a.channel == b.channel && a.values == b.values;
}

}  // namespace

void PipelineParams::validate() const {
  semblance.validate();
  enhance.validate();
  skeleton.validate();
}

json params_to_json(const PipelineParams& p) {
  return json{
      {"semblance",
       {{"half_window_xy", p.semblance.half_window_xy},
        {"half_window_t", p.semblance.half_window_t},
        {"clamp_floor", p.semblance.clamp_floor}}},
      {"enhance",
       {{"gaussian_sigma", p.enhance.gaussian_sigma},
        {"gaussian_size", p.enhance.gaussian_size},
        {"clahe_tiles", p.enhance.clahe_tiles},
        {"clahe_clip", p.enhance.clahe_clip},
        {"clahe_bins", p.enhance.clahe_bins},
        {"t_l", p.enhance.t_l},
        {"t_y", p.enhance.t_y},
        {"t_v", p.enhance.t_v},
        {"t_c", p.enhance.t_c}}},
      {"skeleton",
       {{"t_w", p.skeleton.prune_threshold ? json(*p.skeleton.prune_threshold) : json(nullptr)},
        {"t_w_percentile", p.skeleton.prune_percentile},
        {"min_component", p.skeleton.min_component},
        {"min_branch", p.skeleton.min_branch},
        {"geo_radius", p.skeleton.geo_radius}}},
      {"ablation", p.ablation}};
}

PipelineParams params_from_json(const json& patch, const PipelineParams& base) {
  if (!patch.is_object()) throw ValidationError("params: document must be a JSON object");
  reject_unknown(patch, {"semblance", "enhance", "skeleton", "ablation"}, "params");
  for (const char* section : {"semblance", "enhance", "skeleton"}) {
    if (patch.contains(section) && !patch.at(section).is_object()) {
      throw ValidationError(std::string("params: ") + section + " must be an object");
    }
  }
  // t_w: null means "use the percentile"; merge_patch would drop it instead.
  std::optional<double> t_w = base.skeleton.prune_threshold;
  json doc = params_to_json(base);
  json body = patch;
  if (body.contains("skeleton") && body["skeleton"].contains("t_w")) {
    const json& v = body["skeleton"]["t_w"];
    if (v.is_null()) {
      t_w.reset();
    } else if (v.is_number()) {
      t_w = v.get<double>();
    } else {
      throw ValidationError("params: skeleton.t_w must be a number or null");
    }
    body["skeleton"].erase("t_w");
  }
  doc.merge_patch(body);

  const json& s = doc.at("semblance");
  reject_unknown(s, {"half_window_xy", "half_window_t", "clamp_floor"}, "semblance");
  const json& e = doc.at("enhance");
  reject_unknown(e, {"gaussian_sigma", "gaussian_size", "clahe_tiles", "clahe_clip", "clahe_bins", "t_l",
                     "t_y", "t_v", "t_c"},
                 "enhance");
  const json& k = doc.at("skeleton");
  reject_unknown(k, {"t_w", "t_w_percentile", "min_component", "min_branch", "geo_radius"}, "skeleton");

  PipelineParams p;
  p.semblance.half_window_xy = field<int>(s, "half_window_xy", "semblance");
  p.semblance.half_window_t = field<int>(s, "half_window_t", "semblance");
  p.semblance.clamp_floor = field<double>(s, "clamp_floor", "semblance");
  p.enhance.gaussian_sigma = field<double>(e, "gaussian_sigma", "enhance");
  p.enhance.gaussian_size = field<int>(e, "gaussian_size", "enhance");
  p.enhance.clahe_tiles = field<int>(e, "clahe_tiles", "enhance");
  p.enhance.clahe_clip = field<double>(e, "clahe_clip", "enhance");
  p.enhance.clahe_bins = field<int>(e, "clahe_bins", "enhance");
  p.enhance.t_l = field<double>(e, "t_l", "enhance");
  p.enhance.t_y = field<double>(e, "t_y", "enhance");
  p.enhance.t_v = field<double>(e, "t_v", "enhance");
  p.enhance.t_c = field<double>(e, "t_c", "enhance");
  p.skeleton.prune_threshold = t_w;
  p.skeleton.prune_percentile = field<double>(k, "t_w_percentile", "skeleton");
  p.skeleton.min_component = field<int>(k, "min_component", "skeleton");
  p.skeleton.min_branch = field<int>(k, "min_branch", "skeleton");
  p.skeleton.geo_radius = field<int>(k, "geo_radius", "skeleton");
  p.ablation = field<bool>(doc, "ablation", "params");
  p.validate();
  return p;
}

PipelineParams apply_override(const PipelineParams& base, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  const std::string path = assignment.substr(0, eq);
  if (eq == std::string::npos) throw ValidationError("override must look like key=value: " + assignment);
  json value;
  try {
    value = json::parse(assignment.substr(eq + 1));
  } catch (const json::exception&) {
    throw ValidationError("override value is not valid JSON: " + assignment);
  }
  json patch;
  if (dot == std::string::npos || dot > eq) {
    patch[path] = value;
  } else {
    patch[path.substr(0, dot)] = json{{path.substr(dot + 1), value}};
  }
  return params_from_json(patch, base);
}

bool PipelineResult::ran_stage(const std::string& name) const {
  return std::any_of(timings.begin(), timings.end(), [&](const StageTiming& s) { return s.stage == name; });
}

std::vector<std::string> PipelineResult::stage_names() const {
  std::vector<std::string> names;
  for (const auto& s : timings) names.push_back(s.stage);
  return names;
}

bool same_outputs(const PipelineResult& a, const PipelineResult& b) {
  const auto same_list = [](const auto& x, const auto& y) {
    return std::equal(x.begin(), x.end(), y.begin(), y.end(), [](const auto& l, const auto& r) { return same(l, r); });
  };
  const bool blended_same = a.blended.has_value() == b.blended.has_value() &&
                            (!a.blended || a.blended->pixels == b.blended->pixels);
  return a.t_index == b.t_index && a.ablation == b.ablation && same(a.semblance_prev, b.semblance_prev) &&
         same(a.semblance_cur, b.semblance_cur) && same(a.semblance_next, b.semblance_next) && blended_same &&
         same_list(a.intensities, b.intensities) && same_list(a.enhanced, b.enhanced) &&
         a.channel_binaries == b.channel_binaries && a.combined == b.combined &&
         a.discontinuity.values == b.discontinuity.values && a.geological.values == b.geological.values &&
         a.skeleton == b.skeleton && a.prune_threshold == b.prune_threshold && a.pruned == b.pruned &&
         a.fault_lines == b.fault_lines && a.stage_names() == b.stage_names();
}

PipelineResult run_section(const SeismicVolume& volume, std::size_t t, const PipelineParams& params) {
  params.validate();
  const std::size_t n_time = volume.header().n_time;
  if (t >= n_time) {
    throw ValidationError("time index " + std::to_string(t) + " out of range [0, " + std::to_string(n_time) + ")");
  }
  PipelineResult r;
  r.t_index = t;
  r.ablation = params.ablation;
  StageClock stage(r.timings);
  const EnhanceParams& ep = params.enhance;

  stage("semblance", [&] {
    r.semblance_cur = semblance(volume, t, params.semblance);
    r.semblance_prev = t > 0 ? semblance(volume, t - 1, params.semblance) : r.semblance_cur;
    r.semblance_next = t + 1 < n_time ? semblance(volume, t + 1, params.semblance) : r.semblance_cur;
  });

  if (params.ablation) {
    r.intensities.push_back(intensity_from_semblance(r.semblance_cur));
  } else {
    stage("blend", [&] { r.blended = blend_rgb(r.semblance_prev, r.semblance_cur, r.semblance_next); });
    stage("transform", [&] {
      r.intensities.push_back(extract_intensity(rgb_to_lab(*r.blended), Channel::L));
      r.intensities.push_back(extract_intensity(rgb_to_ycbcr(*r.blended), Channel::Y));
      r.intensities.push_back(extract_intensity(rgb_to_hsv(*r.blended), Channel::V));
    });
  }

  std::vector<IntensityMap> smoothed;
  stage("smooth", [&] {
    for (const auto& m : r.intensities) smoothed.push_back(gaussian_smooth(m, ep.gaussian_sigma, ep.gaussian_size));
  });
  stage("clahe", [&] {
    for (const auto& m : smoothed) r.enhanced.push_back(clahe(m, ep.clahe_tiles, ep.clahe_clip, ep.clahe_bins));
  });
  stage("threshold", [&] {
    for (const auto& m : r.enhanced) r.channel_binaries.push_back(threshold_channel(m, ep.threshold_for(m.channel)));
  });
  if (params.ablation) {
    r.combined = r.channel_binaries.front();
    r.combined.provenance = Provenance::b_combined;
  } else {
    stage("combine", [&] {
      r.combined = combine_binary(r.channel_binaries[0], r.channel_binaries[1], r.channel_binaries[2],
                                  r.semblance_cur, ep.t_c);
    });
  }

  stage("discontinuity", [&] {
    r.discontinuity = discontinuity_map(r.semblance_prev, r.semblance_cur, r.semblance_next,
                                        params.semblance.clamp_floor);
  });
  stage("geological_weight", [&] {
    r.geological = geological_weight(r.discontinuity, extract_time_section(volume, t), params.skeleton.geo_radius);
  });
  stage("medial_axis", [&] { r.skeleton = medial_axis(r.combined); });
  stage("dimensional_weight", [&] { r.skeleton = dimensional_weight(r.skeleton, r.combined); });
  stage("attach_weight", [&] { r.skeleton = attach_geological_weight(r.skeleton, r.geological); });
  stage("prune", [&] {
    r.prune_threshold = params.skeleton.prune_threshold.value_or(
        weight_percentile(r.skeleton, params.skeleton.prune_percentile));
    r.pruned = prune(r.skeleton, r.prune_threshold);
  });
  stage("cleanup", [&] {
    r.fault_lines = cleanup(r.pruned, params.skeleton.min_component, params.skeleton.min_branch);
  });
  return r;
}

std::vector<SectionOutcome> run_volume(const SeismicVolume& volume, std::span<const std::size_t> ts,
                                       const PipelineParams& params, unsigned workers) {
  std::vector<SectionOutcome> outcomes(ts.size());
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, ts.size())));

  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < ts.size(); i = next++) {
      SectionOutcome& out = outcomes[i];
      out.t_index = ts[i];
      try {
        out.result = run_section(volume, ts[i], params);
      } catch (const Error& e) {
        out.error_kind = e.kind();
        out.error = e.what();
      } catch (const std::exception& e) {
        out.error_kind = ErrorKind::stage;
        out.error = e.what();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  return outcomes;
}

}  // namespace seisfault
