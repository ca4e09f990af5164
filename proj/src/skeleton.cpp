#include "seisfault/skeleton.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "seisfault/error.hpp"

namespace seisfault {

namespace {

// Cyclic 8-neighborhood; even indices are the 4-neighbors.
constexpr std::array<std::array<int, 2>, 8> kRing = {{
    {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}, {1, 0}, {1, 1}}};

bool set_at(const BitGrid& m, long x, long y) { return m.in_bounds(x, y) && m(x, y) != 0; }

int neighbor_count(const BitGrid& m, long x, long y) {
  int n = 0;
  for (const auto& d : kRing) n += set_at(m, x + d[0], y + d[1]) ? 1 : 0;
  return n;
}

// Yokoi 8-connectivity number; 1 means deleting the pixel keeps topology.
int connectivity_number(const BitGrid& m, long x, long y) {
  std::array<int, 9> c{};
  for (std::size_t k = 0; k < 8; ++k) c[k] = set_at(m, x + kRing[k][0], y + kRing[k][1]) ? 0 : 1;
  c[8] = c[0];
  const auto at = [&](std::size_t k) { return c[k % 8]; };
  int n = 0;
  for (std::size_t k = 0; k < 8; k += 2) n += at(k) - at(k) * at(k + 1) * at(k + 2);
  return n;
}

bool in_full_block(const BitGrid& m, long x, long y) {
  for (long ox = -1; ox <= 0; ++ox) {
    for (long oy = -1; oy <= 0; ++oy) {
      if (set_at(m, x + ox, y + oy) && set_at(m, x + ox + 1, y + oy) &&
          set_at(m, x + ox, y + oy + 1) && set_at(m, x + ox + 1, y + oy + 1)) {
        return true;
      }
    }
  }
  return false;
}

bool removable(const BitGrid& m, long x, long y) {
  return neighbor_count(m, x, y) >= 2 && connectivity_number(m, x, y) == 1;
}

// Lower envelope of parabolas (Felzenszwalb & Huttenlocher), squared distances.
void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
            std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  constexpr double kInf = 1e300;
  const auto meet = [&](int q, int p) {
    return ((f[q] + 1.0 * q * q) - (f[p] + 1.0 * p * p)) / (2.0 * q - 2.0 * p);
  };
  std::size_t k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = 1; q < n; ++q) {
    double s = meet(q, v[k]);
    while (s <= z[k]) {
      --k;
      s = meet(q, v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const int p = v[k];
    d[static_cast<std::size_t>(q)] = 1.0 * (q - p) * (q - p) + f[p];
  }
}

WeightedSkeleton require_stage(const WeightedSkeleton& sk, SkeletonStage at_least, const char* op) {
  if (static_cast<int>(sk.stage) < static_cast<int>(at_least)) {
    throw ValidationError(std::string(op) + ": skeleton has not been through the required stage");
  }
  return sk;
}

}  // namespace

void SkeletonParams::validate() const {
  if (prune_threshold && !(*prune_threshold >= 0.0)) {
    throw ValidationError("prune_threshold must be >= 0");
  }
  if (!(prune_percentile >= 0.0 && prune_percentile <= 100.0)) {
    throw ValidationError("prune_percentile must lie in [0, 100]");
  }
  if (min_component < 1) throw ValidationError("min_component must be >= 1");
  if (min_branch < 1) throw ValidationError("min_branch must be >= 1");
  if (geo_radius < 0) throw ValidationError("geo_radius must be >= 0");
}

BitGrid WeightedSkeleton::mask() const {
  BitGrid m(nx, ny, 0);
  for (const auto& p : points) m(p.x, p.y) = 1;
  return m;
}

ScalarGrid distance_transform(const BitGrid& mask) {
  // One-pixel background ring stands in for everything outside the grid.
  const std::size_t px = mask.nx() + 2;
  const std::size_t py = mask.ny() + 2;
  constexpr double kFar = 1e20;
  Grid<double> sq(px, py, 0.0);
  for (std::size_t x = 0; x < mask.nx(); ++x) {
    for (std::size_t y = 0; y < mask.ny(); ++y) sq(x + 1, y + 1) = mask(x, y) ? kFar : 0.0;
  }
  const std::size_t longest = std::max(px, py);
  std::vector<double> f;
  std::vector<double> d;
  std::vector<int> v(longest);
  std::vector<double> z(longest + 1);
  f.reserve(longest);
  for (std::size_t x = 0; x < px; ++x) {
    f.assign(py, 0.0);
    for (std::size_t y = 0; y < py; ++y) f[y] = sq(x, y);
    d.assign(py, 0.0);
    edt_1d(f, d, v, z);
    for (std::size_t y = 0; y < py; ++y) sq(x, y) = d[y];
  }
  for (std::size_t y = 0; y < py; ++y) {
    f.assign(px, 0.0);
    for (std::size_t x = 0; x < px; ++x) f[x] = sq(x, y);
    d.assign(px, 0.0);
    edt_1d(f, d, v, z);
    for (std::size_t x = 0; x < px; ++x) sq(x, y) = d[x];
  }
  ScalarGrid out(mask.nx(), mask.ny(), 0.0);
  for (std::size_t x = 0; x < mask.nx(); ++x) {
    for (std::size_t y = 0; y < mask.ny(); ++y) {
      out(x, y) = mask(x, y) ? std::sqrt(sq(x + 1, y + 1)) : 0.0;
    }
  }
  return out;
}

WeightedSkeleton medial_axis_points(const BinaryMap& b) {
  const ScalarGrid dist = distance_transform(b.bits);
  WeightedSkeleton sk{b.t_index, b.bits.nx(), b.bits.ny(), SkeletonStage::axis, {}};
  for (std::size_t x = 0; x < b.bits.nx(); ++x) {
    for (std::size_t y = 0; y < b.bits.ny(); ++y) {
      if (!b.bits(x, y)) continue;
      const double r = dist(x, y);
      bool contained = false;
      for (const auto& d : kRing) {
        const long qx = static_cast<long>(x) + d[0];
        const long qy = static_cast<long>(y) + d[1];
        if (!set_at(b.bits, qx, qy)) continue;
        const double step = (d[0] != 0 && d[1] != 0) ? std::numbers::sqrt2 : 1.0;
        if (dist(qx, qy) >= r + step - 1e-9) {
          contained = true;
          break;
        }
      }
      if (!contained) sk.points.push_back({static_cast<int>(x), static_cast<int>(y), r});
    }
  }
  return sk;
}

void thin_mask(BitGrid& mask, const ScalarGrid* priority) {
  std::vector<Pixel> order;
  for (std::size_t x = 0; x < mask.nx(); ++x) {
    for (std::size_t y = 0; y < mask.ny(); ++y) {
      if (mask(x, y)) order.push_back({static_cast<int>(x), static_cast<int>(y)});
    }
  }
  const auto rank = [&](const Pixel& p) { return priority == nullptr ? 0.0 : (*priority)(p.x, p.y); };
  std::stable_sort(order.begin(), order.end(), [&](const Pixel& a, const Pixel& b) { return rank(a) < rank(b); });

  // Pixels are offered level by level, so a higher-priority pixel is only
  // considered once everything below it is stable.
  std::vector<std::size_t> level_end;
  for (std::size_t i = 1; i <= order.size(); ++i) {
    if (i == order.size() || rank(order[i]) != rank(order[i - 1])) level_end.push_back(i);
  }

  for (const std::size_t end : level_end) {
    // Break filled 2x2 blocks first so that simple-point removal below cannot
    // eat two-pixel-wide runs from one end.
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < end; ++i) {
        const Pixel& p = order[i];
        if (mask(p.x, p.y) && in_full_block(mask, p.x, p.y) && removable(mask, p.x, p.y)) {
          mask(p.x, p.y) = 0;
          changed = true;
        }
      }
    }
    changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < end; ++i) {
        const Pixel& p = order[i];
        if (mask(p.x, p.y) && removable(mask, p.x, p.y)) {
          mask(p.x, p.y) = 0;
          changed = true;
        }
      }
    }
  }

  // Blocks that no pixel deletes cleanly from: unit width wins over topology.
  for (const auto& p : order) {
    if (mask(p.x, p.y) && in_full_block(mask, p.x, p.y)) mask(p.x, p.y) = 0;
  }
}

WeightedSkeleton medial_axis(const BinaryMap& b) {
  WeightedSkeleton raw = medial_axis_points(b);
  BitGrid mask = raw.mask();
  ScalarGrid radius(raw.nx, raw.ny, 0.0);
  for (const auto& p : raw.points) radius(p.x, p.y) = p.disk_radius;
  thin_mask(mask, &radius);
  std::erase_if(raw.points, [&](const SkeletonPoint& p) { return mask(p.x, p.y) == 0; });
  return raw;
}

std::vector<Pixel> disk_contacts(const BitGrid& mask, const SkeletonPoint& p) {
  const double reach = p.disk_radius + 0.5;
  const long span = static_cast<long>(std::ceil(reach));
  const long nx = static_cast<long>(mask.nx());
  const long ny = static_cast<long>(mask.ny());
  std::vector<Pixel> contacts;
  for (long x = std::max(-1L, p.x - span); x <= std::min(nx, p.x + span); ++x) {
    for (long y = std::max(-1L, p.y - span); y <= std::min(ny, p.y + span); ++y) {
      if (set_at(mask, x, y)) continue;
      const double dx = static_cast<double>(x - p.x);
      const double dy = static_cast<double>(y - p.y);
      if (std::sqrt(dx * dx + dy * dy) > reach + 1e-9) continue;
      if (set_at(mask, x + 1, y) || set_at(mask, x - 1, y) || set_at(mask, x, y + 1) ||
          set_at(mask, x, y - 1)) {
        contacts.push_back({static_cast<int>(x), static_cast<int>(y)});
      }
    }
  }
  return contacts;
}

double longest_contact_arc(const std::vector<Pixel>& contacts, const SkeletonPoint& p) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  if (contacts.size() < 2) return kTwoPi * p.disk_radius;
  std::vector<double> angles;
  angles.reserve(contacts.size());
  for (const auto& c : contacts) {
    angles.push_back(std::atan2(static_cast<double>(c.y - p.y), static_cast<double>(c.x - p.x)));
  }
  std::sort(angles.begin(), angles.end());
  double gap = angles.front() + kTwoPi - angles.back();
  for (std::size_t i = 1; i < angles.size(); ++i) gap = std::max(gap, angles[i] - angles[i - 1]);
  return gap * p.disk_radius;
}

WeightedSkeleton dimensional_weight(const WeightedSkeleton& sk, const BinaryMap& b) {
  WeightedSkeleton out = require_stage(sk, SkeletonStage::axis, "dimensional_weight");
  if (b.bits.nx() != sk.nx || b.bits.ny() != sk.ny) {
    throw ValidationError("dimensional_weight: mask dimensions differ from the skeleton");
  }
  for (auto& p : out.points) p.k = longest_contact_arc(disk_contacts(b.bits, p), p);
  out.stage = std::max(out.stage, SkeletonStage::dimensional);
  return out;
}

WeightedSkeleton attach_geological_weight(const WeightedSkeleton& sk, const GeologicalWeightMap& g) {
  WeightedSkeleton out = require_stage(sk, SkeletonStage::dimensional, "attach_geological_weight");
  if (g.values.nx() != sk.nx || g.values.ny() != sk.ny) {
    throw ValidationError("attach_geological_weight: weight map dimensions differ from the skeleton");
  }
  for (auto& p : out.points) {
    p.g = g.values(p.x, p.y);
    p.w = p.k * p.g;
  }
  out.stage = SkeletonStage::weighted;
  return out;
}

double weight_percentile(const WeightedSkeleton& sk, double percentile) {
  if (sk.points.empty()) return 0.0;
  std::vector<double> w;
  w.reserve(sk.points.size());
  for (const auto& p : sk.points) w.push_back(p.w);
  std::sort(w.begin(), w.end());
  const double pos = std::clamp(percentile, 0.0, 100.0) / 100.0 * static_cast<double>(w.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, w.size() - 1);
  return w[lo] + (pos - static_cast<double>(lo)) * (w[hi] - w[lo]);
}

BinaryMap prune(const WeightedSkeleton& sk, double t_w) {
  require_stage(sk, SkeletonStage::weighted, "prune");
  BinaryMap out{sk.t_index, BitGrid(sk.nx, sk.ny, 0), Provenance::skeleton_pruned};
  for (const auto& p : sk.points) {
    if (p.w >= t_w) out.bits(p.x, p.y) = 1;
  }
  return out;
}

std::vector<std::vector<Pixel>> connected_components(const BitGrid& mask) {
  BitGrid seen(mask.nx(), mask.ny(), 0);
  std::vector<std::vector<Pixel>> components;
  std::vector<Pixel> stack;
  for (std::size_t x = 0; x < mask.nx(); ++x) {
    for (std::size_t y = 0; y < mask.ny(); ++y) {
      if (!mask(x, y) || seen(x, y)) continue;
      std::vector<Pixel> comp;
      stack.push_back({static_cast<int>(x), static_cast<int>(y)});
      seen(x, y) = 1;
      while (!stack.empty()) {
        const Pixel p = stack.back();
        stack.pop_back();
        comp.push_back(p);
        for (const auto& d : kRing) {
          const long qx = p.x + d[0];
          const long qy = p.y + d[1];
          if (set_at(mask, qx, qy) && !seen(qx, qy)) {
            seen(qx, qy) = 1;
            stack.push_back({static_cast<int>(qx), static_cast<int>(qy)});
          }
        }
      }
      std::sort(comp.begin(), comp.end());
      components.push_back(std::move(comp));
    }
  }
  return components;
}

BinaryMap cleanup(const BinaryMap& b, int min_component, int min_branch) {
  if (min_component < 1 || min_branch < 1) {
    throw ValidationError("cleanup: lengths must be >= 1");
  }
  BinaryMap out{b.t_index, b.bits, Provenance::fault_lines};
  BitGrid& m = out.bits;
  bool changed = true;
  while (changed) {
    changed = false;

    for (const auto& comp : connected_components(m)) {
      if (comp.size() >= static_cast<std::size_t>(min_component)) continue;
      for (const auto& p : comp) m(p.x, p.y) = 0;
      changed = true;
    }

    // Walk from every endpoint until a junction (>= 3 neighbors) is reached.
    std::vector<Pixel> doomed;
    std::vector<Pixel> joints;
    for (std::size_t x = 0; x < m.nx(); ++x) {
      for (std::size_t y = 0; y < m.ny(); ++y) {
        if (!m(x, y) || neighbor_count(m, x, y) != 1) continue;
        std::vector<Pixel> path;
        Pixel prev{-1, -1};
        Pixel cur{static_cast<int>(x), static_cast<int>(y)};
        bool reached_junction = false;
        while (true) {
          if (neighbor_count(m, cur.x, cur.y) >= 3) {
            reached_junction = true;
            break;
          }
          path.push_back(cur);
          std::optional<Pixel> next;
          for (const auto& d : kRing) {
            const Pixel q{cur.x + d[0], cur.y + d[1]};
            if (!set_at(m, q.x, q.y) || q == prev) continue;
            if (std::find(path.begin(), path.end(), q) != path.end()) continue;
            next = q;
            break;
          }
          if (!next) break;
          prev = cur;
          cur = *next;
        }
        if (reached_junction && path.size() < static_cast<std::size_t>(min_branch)) {
          doomed.insert(doomed.end(), path.begin(), path.end());
          joints.push_back(cur);
        }
      }
    }
    for (const auto& p : doomed) {
      if (m(p.x, p.y)) {
        m(p.x, p.y) = 0;
        changed = true;
      }
    }
    // A junction pixel that only carried the removed branch goes with it, so
    // the thinning below cannot prefer it over the main line.
    for (const auto& p : joints) {
      if (m(p.x, p.y) && removable(m, p.x, p.y)) {
        m(p.x, p.y) = 0;
        changed = true;
      }
    }

    const BitGrid before = m;
    thin_mask(m);
    if (m != before) changed = true;
  }
  return out;
}

}  // namespace seisfault
