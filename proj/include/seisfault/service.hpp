#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "seisfault/pipeline.hpp"
#include "seisfault/volume.hpp"

namespace seisfault {

// Layer names accepted by POST /api/run.
const std::vector<std::string>& known_layers();

// PNG bytes of one layer, or nothing when the layer does not exist for this
// result (e.g. color-path layers under ablation).
std::optional<std::vector<unsigned char>> render_layer(const PipelineResult& result,
                                                       const SeismicVolume& volume,
                                                       std::string_view layer);

std::string base64_encode(const std::vector<unsigned char>& bytes);

// HTTP/JSON front end over one immutable volume:
//   GET  /api/volume          header and truth availability
//   GET  /api/params/default  default parameter document
//   POST /api/run             {t_index, params?, layers?} -> layers as base64 PNG
class FaultService {
 public:
  struct Reply {
    int status = 200;
    nlohmann::json body;
  };

  FaultService(std::optional<SeismicVolume> volume, std::vector<FaultGroundTruth> truth,
               PipelineParams defaults = {});
  ~FaultService();
  FaultService(const FaultService&) = delete;
  FaultService& operator=(const FaultService&) = delete;

  Reply volume_info() const;
  Reply default_params() const;
  Reply run(const std::string& request_body) const;

  // Binds and serves until stop(); port 0 picks a free port (see port()).
  bool bind(const std::string& host, int port);
  int port() const { return port_; }
  bool serve();
  void wait_until_ready() const;
  void stop();

  // Optional directory of static assets, mounted at "/".
  void set_static_dir(const std::string& dir) { static_dir_ = dir; }

 private:
  struct Server;
  void install_routes();

  std::optional<SeismicVolume> volume_;
  std::vector<FaultGroundTruth> truth_;
  PipelineParams defaults_;
  std::unique_ptr<Server> server_;
  std::string static_dir_;
  int port_ = -1;
};

}  // namespace seisfault
