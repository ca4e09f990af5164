#include "seisfault/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "seisfault/error.hpp"
#include "seisfault/skeleton.hpp"

namespace seisfault {

namespace {

// Distance from v to the nearest element of a sorted, non-empty list.
double nearest_gap(const std::vector<int>& sorted, int v) {
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
  int best = std::numeric_limits<int>::max();
  if (it != sorted.end()) best = *it - v;
  if (it != sorted.begin()) best = std::min(best, v - *std::prev(it));
  return static_cast<double>(best);
}

// Mean over a in from of min over b in to of point_distance(a, b). The
// minimum splits per axis, so sorted coordinate lists suffice.
double directed_mean(std::span<const Pixel> from, std::span<const Pixel> to) {
  std::vector<int> xs;
  std::vector<int> ys;
  xs.reserve(to.size());
  ys.reserve(to.size());
  for (const auto& p : to) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  double sum = 0.0;
  for (const auto& a : from) sum += std::min(nearest_gap(xs, a.x), nearest_gap(ys, a.y));
  return sum / static_cast<double>(from.size());
}

double directed_euclidean_mean(std::span<const Pixel> from, std::span<const Pixel> to) {
  double sum = 0.0;
  for (const auto& a : from) {
    double best = std::numeric_limits<double>::max();
    for (const auto& b : to) {
      const double dx = a.x - b.x;
      const double dy = a.y - b.y;
      best = std::min(best, dx * dx + dy * dy);
    }
    sum += std::sqrt(best);
  }
  return sum / static_cast<double>(from.size());
}

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<double> read_optional(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace

double point_distance(Pixel a, Pixel b) {
  return static_cast<double>(std::min(std::abs(a.x - b.x), std::abs(a.y - b.y)));
}

std::vector<Pixel> set_pixels(const BitGrid& mask) {
  std::vector<Pixel> out;
  for (std::size_t x = 0; x < mask.nx(); ++x) {
    for (std::size_t y = 0; y < mask.ny(); ++y) {
      if (mask(x, y)) out.push_back({static_cast<int>(x), static_cast<int>(y)});
    }
  }
  return out;
}

DistanceReport average_distance(std::span<const Pixel> detected, std::span<const Pixel> gt,
                                std::size_t t_index) {
  DistanceReport r;
  r.t_index = t_index;
  r.detected_count = detected.size();
  r.gt_count = gt.size();
  if (detected.empty() || gt.empty()) return r;
  r.mean_directed_det_to_gt = directed_mean(detected, gt);
  r.mean_directed_gt_to_det = directed_mean(gt, detected);
  r.mean_symmetric = 0.5 * (*r.mean_directed_det_to_gt + *r.mean_directed_gt_to_det);
  r.mean_symmetric_euclidean =
      0.5 * (directed_euclidean_mean(detected, gt) + directed_euclidean_mean(gt, detected));
  return r;
}

DistanceReport average_distance(const BinaryMap& detected, const FaultGroundTruth& gt) {
  for (const auto& p : gt.pixels) {
    if (!detected.bits.in_bounds(p.x, p.y)) {
      throw ValidationError("average_distance: ground-truth pixel outside the section");
    }
  }
  const auto det = set_pixels(detected.bits);
  return average_distance(det, gt.pixels, detected.t_index);
}

void to_json(nlohmann::json& j, const DistanceReport& r) {
  j = nlohmann::json{{"t_index", r.t_index},
                     {"mean_directed_det_to_gt", optional_number(r.mean_directed_det_to_gt)},
                     {"mean_directed_gt_to_det", optional_number(r.mean_directed_gt_to_det)},
                     {"mean_symmetric", optional_number(r.mean_symmetric)},
                     {"mean_symmetric_euclidean", optional_number(r.mean_symmetric_euclidean)},
                     {"detected_count", r.detected_count},
                     {"gt_count", r.gt_count},
                     {"defined", r.mean_symmetric.has_value()}};
}

void from_json(const nlohmann::json& j, DistanceReport& r) {
  r.t_index = j.at("t_index").get<std::size_t>();
  r.mean_directed_det_to_gt = read_optional(j, "mean_directed_det_to_gt");
  r.mean_directed_gt_to_det = read_optional(j, "mean_directed_gt_to_det");
  r.mean_symmetric = read_optional(j, "mean_symmetric");
  r.mean_symmetric_euclidean = read_optional(j, "mean_symmetric_euclidean");
  r.detected_count = j.value("detected_count", std::size_t{0});
  r.gt_count = j.value("gt_count", std::size_t{0});
}

std::string render_table(const std::string& corner, const std::vector<std::string>& columns,
                         const std::vector<TableRow>& rows) {
  const auto fmt = [](const std::optional<double>& v) {
    if (!v) return std::string("n/a");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", *v);
    return std::string(buf);
  };
  std::size_t label_w = corner.size();
  for (const auto& r : rows) label_w = std::max(label_w, r.label.size());
  std::vector<std::size_t> col_w;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    std::size_t w = std::max<std::size_t>(columns[c].size(), 6);
    for (const auto& r : rows) {
      if (c < r.values.size()) w = std::max(w, fmt(r.values[c]).size());
    }
    col_w.push_back(w);
  }
  std::ostringstream out;
  const auto pad = [&](const std::string& s, std::size_t w) {
    out << s << std::string(w > s.size() ? w - s.size() : 0, ' ');
  };
  pad(corner, label_w);
  for (std::size_t c = 0; c < columns.size(); ++c) {
    out << "  ";
    pad(columns[c], col_w[c]);
  }
  out << '\n';
  std::size_t total = label_w;
  for (auto w : col_w) total += 2 + w;
  out << std::string(total, '-') << '\n';
  for (const auto& r : rows) {
    pad(r.label, label_w);
    for (std::size_t c = 0; c < columns.size(); ++c) {
      out << "  ";
      pad(c < r.values.size() ? fmt(r.values[c]) : std::string("n/a"), col_w[c]);
    }
    out << '\n';
  }
  return out.str();
}

nlohmann::json lines_to_json(const BinaryMap& lines) {
  const BitGrid& m = lines.bits;
  const auto neighbors = [&](Pixel p) {
    std::vector<Pixel> out;
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        if ((dx != 0 || dy != 0) && m.in_bounds(p.x + dx, p.y + dy) && m(p.x + dx, p.y + dy)) {
          out.push_back({p.x + dx, p.y + dy});
        }
      }
    }
    return out;
  };
  nlohmann::json components = nlohmann::json::array();
  for (const auto& comp : connected_components(m)) {
    Pixel start = comp.front();
    for (const auto& p : comp) {
      if (neighbors(p).size() == 1) {
        start = p;
        break;
      }
    }
    BitGrid seen(m.nx(), m.ny(), 0);
    std::vector<Pixel> stack{start};
    nlohmann::json walk = nlohmann::json::array();
    while (!stack.empty()) {
      const Pixel p = stack.back();
      stack.pop_back();
      if (seen(p.x, p.y)) continue;
      seen(p.x, p.y) = 1;
      walk.push_back({p.x, p.y});
      auto next = neighbors(p);
      for (auto it = next.rbegin(); it != next.rend(); ++it) {
        if (!seen(it->x, it->y)) stack.push_back(*it);
      }
    }
    components.push_back(std::move(walk));
  }
  return {{"t_index", lines.t_index},
          {"n_inline", m.nx()},
          {"n_crossline", m.ny()},
          {"components", std::move(components)}};
}

BinaryMap lines_from_json(const nlohmann::json& j) {
  try {
    BinaryMap out{j.at("t_index").get<std::size_t>(),
                  BitGrid(j.at("n_inline").get<std::size_t>(), j.at("n_crossline").get<std::size_t>(), 0),
                  Provenance::fault_lines};
    for (const auto& comp : j.at("components")) {
      for (const auto& px : comp) {
        const int x = px.at(0).get<int>();
        const int y = px.at(1).get<int>();
        if (!out.bits.in_bounds(x, y)) throw ValidationError("fault-line pixel outside the section");
        out.bits(x, y) = 1;
      }
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("fault-line file: ") + e.what());
  }
}

std::string time_label(const VolumeHeader& header, std::size_t t) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%gms", header.time_ms(t));
  return buf;
}

}  // namespace seisfault
