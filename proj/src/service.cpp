#include "seisfault/service.hpp"

#include <algorithm>

#include "httplib.h"

#include "seisfault/eval.hpp"
#include "seisfault/render.hpp"

namespace seisfault {

namespace {

using json = nlohmann::json;

std::optional<std::size_t> channel_slot(const PipelineResult& r, Channel c) {
  for (std::size_t i = 0; i < r.enhanced.size(); ++i) {
    if (r.enhanced[i].channel == c) return i;
  }
  return std::nullopt;
}

FaultService::Reply error_reply(int status, const std::string& message) {
  return {status, json{{"error", message}}};
}

}  // namespace

const std::vector<std::string>& known_layers() {
  static const std::vector<std::string> layers = {
      "amplitude",   "semblance", "blended",  "intensity_L", "intensity_Y", "intensity_V", "binary_L",
      "binary_Y",    "binary_V",  "combined", "skeleton",    "fault_lines", "overlay"};
  return layers;
}

std::optional<std::vector<unsigned char>> render_layer(const PipelineResult& r, const SeismicVolume& volume,
                                                       std::string_view layer) {
  const auto channel_of = [](std::string_view suffix) {
    return suffix == "L" ? Channel::L : suffix == "Y" ? Channel::Y : Channel::V;
  };
  if (layer == "amplitude") return render_scalar_png(extract_time_section(volume, r.t_index).values);
  if (layer == "semblance") return render_scalar_png(r.semblance_cur.values, std::pair{0.0, 1.0});
  if (layer == "blended") {
    if (!r.blended) return std::nullopt;
    return render_rgb_png(r.blended->pixels);
  }
  if (layer.starts_with("intensity_") || layer.starts_with("binary_")) {
    const auto slot = channel_slot(r, channel_of(layer.substr(layer.find('_') + 1)));
    if (!slot) return std::nullopt;
    if (layer.starts_with("intensity_")) return render_scalar_png(r.enhanced[*slot].values, std::pair{0.0, 1.0});
    return render_binary_png(r.channel_binaries[*slot].bits);
  }
  if (layer == "combined") return render_binary_png(r.combined.bits);
  if (layer == "skeleton") return render_binary_png(r.skeleton.mask());
  if (layer == "fault_lines") return render_binary_png(r.fault_lines.bits);
  if (layer == "overlay") return render_overlay_png(r.semblance_cur.values, r.fault_lines.bits);
  return std::nullopt;
}

std::string base64_encode(const std::vector<unsigned char>& bytes) {
  static constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const unsigned v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  if (i < bytes.size()) {
    const unsigned v = (bytes[i] << 16) | (i + 1 < bytes.size() ? bytes[i + 1] << 8 : 0);
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += i + 1 < bytes.size() ? kAlphabet[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

struct FaultService::Server {
  httplib::Server http;
};

FaultService::FaultService(std::optional<SeismicVolume> volume, std::vector<FaultGroundTruth> truth,
                           PipelineParams defaults)
    : volume_(std::move(volume)), truth_(std::move(truth)), defaults_(defaults),
      server_(std::make_unique<Server>()) {
  defaults_.validate();
}

FaultService::~FaultService() { stop(); }

FaultService::Reply FaultService::volume_info() const {
  if (!volume_) return error_reply(503, "no volume loaded");
  json header = volume_->header();
  return {200, json{{"header", header}, {"has_truth", !truth_.empty()}}};
}

FaultService::Reply FaultService::default_params() const { return {200, params_to_json(defaults_)}; }

FaultService::Reply FaultService::run(const std::string& request_body) const {
  if (!volume_) return error_reply(503, "no volume loaded");
  json request;
  try {
    request = json::parse(request_body);
  } catch (const json::exception& e) {
    return error_reply(400, std::string("malformed JSON: ") + e.what());
  }
  if (!request.is_object()) return error_reply(400, "request must be a JSON object");
  for (const auto& [key, _] : request.items()) {
    if (key != "t_index" && key != "params" && key != "layers") return error_reply(400, "unknown request key " + key);
  }
  if (!request.contains("t_index") || !request["t_index"].is_number_integer()) {
    return error_reply(400, "t_index must be an integer");
  }
  const long t = request["t_index"].get<long>();

  std::vector<std::string> layers = known_layers();
  if (request.contains("layers")) {
    if (!request["layers"].is_array()) return error_reply(400, "layers must be an array of names");
    layers.clear();
    for (const auto& l : request["layers"]) {
      if (!l.is_string()) return error_reply(400, "layers must be an array of names");
      const auto name = l.get<std::string>();
      if (std::find(known_layers().begin(), known_layers().end(), name) == known_layers().end()) {
        return error_reply(400, "unknown layer: " + name);
      }
      layers.push_back(name);
    }
  }

  PipelineParams params;
  try {
    params = params_from_json(request.value("params", json::object()), defaults_);
  } catch (const Error& e) {
    return error_reply(400, e.what());
  }
  if (t < 0 || static_cast<std::size_t>(t) >= volume_->header().n_time) {
    return error_reply(404, "t_index " + std::to_string(t) + " outside the volume");
  }

  PipelineResult result;
  try {
    result = run_section(*volume_, static_cast<std::size_t>(t), params);
  } catch (const Error& e) {
    return error_reply(e.kind() == ErrorKind::validation ? 400 : 500, e.what());
  }

  json body;
  body["t_index"] = t;
  body["params"] = params_to_json(params);
  body["prune_threshold"] = result.prune_threshold;
  body["fault_pixel_count"] = result.fault_lines.count();
  json images = json::object();
  json missing = json::array();
  for (const auto& name : layers) {
    if (auto png = render_layer(result, *volume_, name)) {
      images[name] = base64_encode(*png);
    } else {
      missing.push_back(name);
    }
  }
  body["layers"] = std::move(images);
  body["unavailable_layers"] = std::move(missing);
  json timings = json::array();
  for (const auto& s : result.timings) timings.push_back({{"stage", s.stage}, {"ms", s.ms}});
  body["timings"] = std::move(timings);
  body["report"] = nullptr;
  for (const auto& gt : truth_) {
    if (gt.t_index == result.t_index) body["report"] = average_distance(result.fault_lines, gt);
  }
  return {200, std::move(body)};
}

void FaultService::install_routes() {
  auto& http = server_->http;
  const auto send = [](httplib::Response& res, const Reply& reply) {
    res.status = reply.status;
    res.set_content(reply.body.dump(), "application/json");
  };
  http.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                            {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                            {"Access-Control-Allow-Headers", "Content-Type"}});
  http.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  http.Get("/api/volume", [this, send](const httplib::Request&, httplib::Response& res) { send(res, volume_info()); });
  http.Get("/api/params/default",
           [this, send](const httplib::Request&, httplib::Response& res) { send(res, default_params()); });
  http.Post("/api/run", [this, send](const httplib::Request& req, httplib::Response& res) { send(res, run(req.body)); });
  if (!static_dir_.empty()) http.set_mount_point("/", static_dir_);
}

bool FaultService::bind(const std::string& host, int port) {
  install_routes();
  if (port == 0) {
    port_ = server_->http.bind_to_any_port(host);
  } else {
    port_ = server_->http.bind_to_port(host, port) ? port : -1;
  }
  return port_ > 0;
}

bool FaultService::serve() { return server_->http.listen_after_bind(); }

void FaultService::wait_until_ready() const { server_->http.wait_until_ready(); }

void FaultService::stop() {
  if (server_) server_->http.stop();
}

}  // namespace seisfault
