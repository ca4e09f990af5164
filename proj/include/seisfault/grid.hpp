#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace seisfault {

// Dense 2D grid indexed [x][y] with y (crossline) fastest-varying.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t nx, std::size_t ny, const T& fill = T{})
      : nx_(nx), ny_(ny), data_(nx * ny, fill) {}

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t x, std::size_t y) { return data_[x * ny_ + y]; }
  const T& operator()(std::size_t x, std::size_t y) const { return data_[x * ny_ + y]; }

  bool in_bounds(long x, long y) const {
    return x >= 0 && y >= 0 && static_cast<std::size_t>(x) < nx_ &&
           static_cast<std::size_t>(y) < ny_;
  }

  template <typename U>
  bool same_shape(const Grid<U>& other) const {
    return nx_ == other.nx() && ny_ == other.ny();
  }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t nx_ = 0;
  std::size_t ny_ = 0;
  std::vector<T> data_;
};

using ScalarGrid = Grid<double>;
using BitGrid = Grid<std::uint8_t>;

struct Pixel {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const Pixel&, const Pixel&) = default;
};

}  // namespace seisfault
