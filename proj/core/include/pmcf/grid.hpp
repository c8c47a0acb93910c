#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <stdexcept>

#include "pmcf/tensor.hpp"

namespace pmcf {

/// Periodic structured grid over the torus. Node (i, j) sits at (i h_1, j h_2);
/// the flat index is i + sizes[0] * j.
class Grid {
 public:
  Grid(int n, std::array<int, kMaxSpatial> sizes, Vec2 periods) : n_(n), sizes_(sizes), periods_(periods) {
    if (n < 1 || n > kMaxSpatial) throw std::invalid_argument("grid dimension must be 1 or 2");
    for (int a = 0; a < n; ++a) {
      if (sizes[a] < 8) throw std::invalid_argument("grid needs at least 8 nodes per axis");
      if (!(periods[a] > 0.0)) throw std::invalid_argument("grid periods must be positive");
      spacing_[a] = periods[a] / sizes[a];
    }
    for (int a = n; a < kMaxSpatial; ++a) {
      sizes_[a] = 1;
      periods_[a] = 0.0;
      spacing_[a] = 0.0;
    }
  }

  /// Convenience: n-dimensional grid with `size` nodes per axis and equal periods.
  static Grid uniform(int n, int size, double period) {
    return Grid(n, {size, n > 1 ? size : 1}, {period, n > 1 ? period : 0.0});
  }

  int n() const { return n_; }
  const std::array<int, kMaxSpatial>& sizes() const { return sizes_; }
  const Vec2& periods() const { return periods_; }
  const Vec2& spacing() const { return spacing_; }
  std::size_t node_count() const { return static_cast<std::size_t>(sizes_[0]) * sizes_[1]; }

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(wrap(i, 0)) + static_cast<std::size_t>(sizes_[0]) * wrap(j, 1);
  }

  /// Flat index of the neighbour offset by (di, dj) from `node`, wrapping periodically.
  std::size_t neighbor(std::size_t node, int di, int dj) const {
    const int i = static_cast<int>(node % sizes_[0]);
    const int j = static_cast<int>(node / sizes_[0]);
    return index(i + di, j + dj);
  }

  /// Neighbour offset by `step` along `axis`.
  std::size_t neighbor_along(std::size_t node, int axis, int step) const {
    return axis == 0 ? neighbor(node, step, 0) : neighbor(node, 0, step);
  }

  Vec2 coordinates(std::size_t node) const {
    Vec2 x{};
    x[0] = static_cast<double>(node % sizes_[0]) * spacing_[0];
    if (n_ > 1) x[1] = static_cast<double>(node / sizes_[0]) * spacing_[1];
    return x;
  }

  double min_spacing() const { return n_ == 1 ? spacing_[0] : std::min(spacing_[0], spacing_[1]); }
  double max_spacing() const { return n_ == 1 ? spacing_[0] : std::max(spacing_[0], spacing_[1]); }

 private:
  int wrap(int i, int axis) const {
    const int m = sizes_[axis];
    int r = i % m;
    return r < 0 ? r + m : r;
  }

  int n_;
  std::array<int, kMaxSpatial> sizes_;
  Vec2 periods_;
  Vec2 spacing_{};
};

}  // namespace pmcf
