#include "seisfault/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "seisfault/ablation.hpp"
#include "seisfault/error.hpp"
#include "seisfault/eval.hpp"
#include "seisfault/io.hpp"
#include "seisfault/pipeline.hpp"
#include "seisfault/render.hpp"
#include "seisfault/service.hpp"
#include "seisfault/synthetic.hpp"

namespace seisfault {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

json read_json(const fs::path& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

void make_dirs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

std::string section_stem(std::size_t t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "t%04zu", t);
  return buf;
}

// defaults < params file < --set overrides
PipelineParams layered_params(const std::string& params_file, const std::vector<std::string>& overrides,
                              bool ablation) {
  PipelineParams p;
  if (!params_file.empty()) p = params_from_json(read_json(params_file), p);
  for (const auto& o : overrides) p = apply_override(p, o);
  if (ablation) p.ablation = true;
  p.validate();
  return p;
}

struct Range {
  std::optional<long> from;
  std::optional<long> to;
};

std::vector<std::size_t> section_range(const VolumeHeader& h, const Range& r) {
  const long last = static_cast<long>(h.n_time) - 1;
  const long a = r.from.value_or(0);
  const long b = r.to.value_or(last);
  if (a < 0 || b > last || a > b) {
    throw ValidationError("time range [" + std::to_string(a) + ", " + std::to_string(b) +
                          "] outside the volume's [0, " + std::to_string(last) + "]");
  }
  std::vector<std::size_t> ts;
  for (long t = a; t <= b; ++t) ts.push_back(static_cast<std::size_t>(t));
  return ts;
}

struct Options {
  std::string spec;
  std::string volume;
  std::string truth;
  std::string params;
  std::vector<std::string> overrides;
  std::vector<std::string> lines;
  std::string out;
  std::string table;
  std::string layers;
  std::string host = "0.0.0.0";
  std::string static_dir;
  Range range;
  long t = -1;
  bool ablation = false;
  unsigned workers = 0;
  int port = 8080;
};

int cmd_synth(const Options& o, std::ostream& out) {
  SyntheticSpec spec = read_json(o.spec).get<SyntheticSpec>();
  spec.validate();
  const auto model = generate_synthetic(spec);
  const fs::path volume_path = o.out;
  const fs::path truth_path = o.truth.empty() ? fs::path(volume_path).replace_extension(".truth.json") : fs::path(o.truth);
  if (volume_path.has_parent_path()) make_dirs(volume_path.parent_path());
  save_volume(model.volume, volume_path);
  save_ground_truth(model.truth, truth_path);
  out << "wrote " << volume_path.string() << " and " << truth_path.string() << "\n";
  return kExitOk;
}

int cmd_run(const Options& o, std::ostream& out, std::ostream& err) {
  const PipelineParams params = layered_params(o.params, o.overrides, o.ablation);
  const SeismicVolume volume = load_volume(o.volume);
  const auto ts = section_range(volume.header(), o.range);

  const fs::path dir = o.out;
  make_dirs(dir / "lines");
  make_dirs(dir / "overlay");
  const auto outcomes = run_volume(volume, ts, params, o.workers);

  json sections = json::array();
  json failed = json::array();
  json timings = json::array();
  for (const auto& oc : outcomes) {
    if (!oc.result) {
      failed.push_back({{"t_index", oc.t_index}, {"error", oc.error}});
      err << "section " << oc.t_index << ": " << oc.error << "\n";
      continue;
    }
    const PipelineResult& r = *oc.result;
    const std::string stem = section_stem(r.t_index);
    write_json(dir / "lines" / (stem + ".json"), lines_to_json(r.fault_lines));
    export_overlay(r.semblance_cur.values, r.fault_lines.bits, dir / "overlay" / (stem + ".png"));
    sections.push_back({{"t_index", r.t_index},
                        {"time_ms", volume.header().time_ms(r.t_index)},
                        {"lines", "lines/" + stem + ".json"},
                        {"overlay", "overlay/" + stem + ".png"},
                        {"stages", r.stage_names()},
                        {"prune_threshold", r.prune_threshold},
                        {"fault_pixel_count", r.fault_lines.count()}});
    json stages = json::array();
    for (const auto& s : r.timings) stages.push_back({{"stage", s.stage}, {"ms", s.ms}});
    timings.push_back({{"t_index", r.t_index}, {"stages", std::move(stages)}});
  }
  const json manifest = {{"volume_file", fs::path(o.volume).filename().string()},
                         {"volume", volume.header()},
                         {"params", params_to_json(params)},
                         {"ablation", params.ablation},
                         {"t_from", ts.front()},
                         {"t_to", ts.back()},
                         {"sections", std::move(sections)},
                         {"failed_sections", failed}};
  write_json(dir / "manifest.json", manifest);
  // Wall-clock measurements live apart from the manifest, which stays reproducible.
  write_json(dir / "timings.json", timings);
  out << "processed " << (outcomes.size() - failed.size()) << " of " << outcomes.size() << " sections into "
      << dir.string() << "\n";
  return failed.empty() ? kExitOk : kExitStage;
}

int cmd_eval(const Options& o, std::ostream& out) {
  if (!fs::exists(o.truth)) throw IoError("truth file not found: " + o.truth);
  const auto truth = load_ground_truth(o.truth);

  struct Variant {
    std::string label;
    std::string dir;
    std::vector<DistanceReport> reports;
  };
  std::vector<Variant> variants;
  std::optional<std::vector<std::size_t>> section_set;
  VolumeHeader header;
  for (const auto& dir : o.lines) {
    const json manifest = read_json(fs::path(dir) / "manifest.json");
    header = manifest.at("volume").get<VolumeHeader>();
    Variant v{manifest.value("ablation", false) ? "Ablated" : "Full", dir, {}};
    std::vector<std::size_t> ts;
    for (const auto& s : manifest.at("sections")) {
      const BinaryMap lines = lines_from_json(read_json(fs::path(dir) / s.at("lines").get<std::string>()));
      const FaultGroundTruth* gt = nullptr;
      for (const auto& g : truth) {
        if (g.t_index == lines.t_index) gt = &g;
      }
      if (gt == nullptr) {
        throw ValidationError("mismatched section sets: truth has no section " + std::to_string(lines.t_index));
      }
      v.reports.push_back(average_distance(lines, *gt));
      ts.push_back(lines.t_index);
    }
    if (section_set && *section_set != ts) {
      throw ValidationError("mismatched section sets between " + variants.front().dir + " and " + dir);
    }
    section_set = ts;
    variants.push_back(std::move(v));
  }
  std::map<std::string, int> seen;
  for (const auto& v : variants) ++seen[v.label];
  for (auto& v : variants) {
    if (seen[v.label] > 1) v.label += " (" + fs::path(v.dir).filename().string() + ")";
  }

  std::vector<std::string> columns;
  json doc_variants = json::array();
  for (const auto& v : variants) {
    columns.push_back(v.label);
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : v.reports) {
      if (r.mean_symmetric) {
        sum += *r.mean_symmetric;
        ++n;
      }
    }
    doc_variants.push_back({{"label", v.label},
                            {"run_dir", fs::path(v.dir).filename().string()},
                            {"reports", v.reports},
                            {"aggregate_mean_symmetric", n ? json(sum / static_cast<double>(n)) : json(nullptr)},
                            {"undefined_sections", v.reports.size() - n}});
  }
  std::vector<TableRow> rows;
  for (std::size_t i = 0; section_set && i < section_set->size(); ++i) {
    TableRow row{time_label(header, (*section_set)[i]), {}};
    for (const auto& v : variants) row.values.push_back(v.reports[i].mean_symmetric);
    rows.push_back(std::move(row));
  }
  TableRow mean_row{"mean", {}};
  for (const auto& dv : doc_variants) {
    const auto& agg = dv.at("aggregate_mean_symmetric");
    mean_row.values.push_back(agg.is_null() ? std::nullopt : std::optional<double>(agg.get<double>()));
  }
  rows.push_back(std::move(mean_row));
  const std::string table = render_table("Time Sections", columns, rows);

  if (!o.out.empty()) {
    write_json(o.out, json{{"variants", std::move(doc_variants)}, {"table", table}});
  }
  if (!o.table.empty()) write_text_file(o.table, table);
  out << table;
  return kExitOk;
}

int cmd_export(const Options& o, std::ostream& out) {
  const PipelineParams params = layered_params(o.params, o.overrides, o.ablation);
  const SeismicVolume volume = load_volume(o.volume);
  if (o.t < 0 || static_cast<std::size_t>(o.t) >= volume.header().n_time) {
    throw ValidationError("--t outside the volume");
  }
  std::vector<std::string> layers;
  if (o.layers.empty()) {
    layers = known_layers();
  } else {
    std::stringstream ss(o.layers);
    for (std::string name; std::getline(ss, name, ',');) {
      if (std::find(known_layers().begin(), known_layers().end(), name) == known_layers().end()) {
        throw ValidationError("unknown layer: " + name);
      }
      layers.push_back(name);
    }
  }
  const PipelineResult r = run_section(volume, static_cast<std::size_t>(o.t), params);
  make_dirs(o.out);
  for (const auto& name : layers) {
    const auto png = render_layer(r, volume, name);
    if (!png) continue;
    const fs::path path = fs::path(o.out) / (section_stem(r.t_index) + "_" + name + ".png");
    write_file(path, *png);
    out << path.string() << "\n";
  }
  return kExitOk;
}

int cmd_serve(const Options& o, std::ostream& out) {
  const PipelineParams params = layered_params(o.params, o.overrides, false);
  std::optional<SeismicVolume> volume;
  if (!o.volume.empty()) volume = load_volume(o.volume);
  std::vector<FaultGroundTruth> truth;
  if (!o.truth.empty()) truth = load_ground_truth(o.truth);
  FaultService service(std::move(volume), std::move(truth), params);
  if (!o.static_dir.empty()) service.set_static_dir(o.static_dir);
  if (!service.bind(o.host, o.port)) throw IoError("cannot bind " + o.host + ":" + std::to_string(o.port));
  out << "serving on http://" << o.host << ":" << service.port() << std::endl;
  return service.serve() ? kExitOk : kExitIo;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::validation: return kExitValidation;
    case ErrorKind::io: return kExitIo;
    case ErrorKind::stage: return kExitStage;
  }
  return kExitStage;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fault detection on seismic time sections"};
  app.require_subcommand(1);
  Options o;

  const auto add_params = [&](CLI::App* cmd) {
    cmd->add_option("--params", o.params, "pipeline parameter JSON");
    cmd->add_option("--set", o.overrides, "override, e.g. enhance.t_l=0.5 (repeatable)");
  };

  auto* synth = app.add_subcommand("synth", "generate a synthetic volume and its ground truth");
  synth->add_option("--spec", o.spec, "synthetic spec JSON")->required();
  synth->add_option("--out", o.out, "output volume file")->required();
  synth->add_option("--truth", o.truth, "ground-truth output (default: <out>.truth.json)");

  auto* run = app.add_subcommand("run", "run the pipeline over a range of time sections");
  run->add_option("--volume", o.volume, "volume file")->required();
  add_params(run);
  run->add_option("--t-from", o.range.from, "first time index");
  run->add_option("--t-to", o.range.to, "last time index (inclusive)");
  run->add_option("--out", o.out, "run directory")->required();
  run->add_flag("--ablation", o.ablation, "disable the color path");
  run->add_option("--workers", o.workers, "worker threads (0 = all cores)");

  auto* eval = app.add_subcommand("eval", "score run directories against ground truth");
  eval->add_option("--lines", o.lines, "run directory (repeatable)")->required();
  eval->add_option("--truth", o.truth, "ground-truth JSON")->required();
  eval->add_option("--out", o.out, "report JSON");
  eval->add_option("--table", o.table, "plain-text table output");

  auto* exp = app.add_subcommand("export", "render pipeline layers of one section as PNG");
  exp->add_option("--volume", o.volume, "volume file")->required();
  add_params(exp);
  exp->add_option("--t", o.t, "time index")->required();
  exp->add_option("--layers", o.layers, "comma-separated layer names (default: all)");
  exp->add_option("--out", o.out, "output directory")->required();
  exp->add_flag("--ablation", o.ablation, "disable the color path");

  auto* serve = app.add_subcommand("serve", "serve the tuning API");
  serve->add_option("--volume", o.volume, "volume file");
  serve->add_option("--truth", o.truth, "ground-truth JSON");
  add_params(serve);
  serve->add_option("--port", o.port, "port (default 8080)");
  serve->add_option("--host", o.host, "bind address");
  serve->add_option("--static", o.static_dir, "directory of console assets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*synth) return cmd_synth(o, out);
    if (*run) return cmd_run(o, out, err);
    if (*eval) return cmd_eval(o, out);
    if (*exp) return cmd_export(o, out);
    if (*serve) return cmd_serve(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return kExitStage;
  }
  return kExitValidation;
}

}  // namespace seisfault
