// SPDX-License-Identifier: Apache-2.0
//
// Uniform tensor grids on axis-aligned boxes, d in {1, 2}, and the inner
// sub-box ("inner mask") on which the constraint functional is evaluated.
//
// Node ordering everywhere is row-major with x fastest:
//   node(i, j) -> j * (n_x + 1) + i,  0 <= i <= n_x, 0 <= j <= n_y.

#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace freqcover {

class GridError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Value type: holds only dimensions, bounds, and cell counts.
class Grid {
public:
  Grid() = default;

  int dim() const noexcept { return dim_; }
  double lo(int axis) const { return lo_[check_axis(axis)]; }
  double hi(int axis) const { return hi_[check_axis(axis)]; }
  double length(int axis) const { return hi_[check_axis(axis)] - lo_[axis]; }
  double h(int axis) const { return h_[check_axis(axis)]; }
  int cells(int axis) const { return n_[check_axis(axis)]; }
  // Node count along an axis (cells + 1).
  int nodes(int axis) const { return n_[check_axis(axis)] + 1; }

  std::int64_t node_count() const noexcept { return total_nodes_; }
  std::int64_t interior_count() const noexcept { return interior_nodes_; }
  std::int64_t boundary_count() const noexcept { return total_nodes_ - interior_nodes_; }

  // Node coordinates are exactly lo_i + j * h_i (same arithmetic everywhere).
  double coord(int axis, int index) const { return lo_[check_axis(axis)] + index * h_[axis]; }

  std::int64_t node_index(int i, int j = 0) const noexcept {
    return static_cast<std::int64_t>(j) * (n_[0] + 1) + i;
  }
  // Inverse of node_index.
  std::array<int, 2> node_ij(std::int64_t node) const noexcept {
    const int stride = n_[0] + 1;
    return {static_cast<int>(node % stride), static_cast<int>(node / stride)};
  }

  bool is_boundary(int i, int j = 0) const noexcept {
    if (i == 0 || i == n_[0]) return true;
    if (dim_ == 2 && (j == 0 || j == n_[1])) return true;
    return false;
  }

  std::array<double, 2> point(int i, int j = 0) const {
    return {coord(0, i), dim_ == 2 ? coord(1, j) : 0.0};
  }

  // Throws GridError on: dim not in {1,2}, non-positive axis length,
  // fewer than 4 cells per axis.
  static Grid create(int dim, const std::vector<std::array<double, 2>>& bounds,
                     const std::vector<int>& cells_per_axis);

private:
  int check_axis(int axis) const {
    if (axis < 0 || axis >= dim_) throw GridError("axis out of range");
    return axis;
  }

  int dim_ = 0;
  std::array<double, 2> lo_{0.0, 0.0};
  std::array<double, 2> hi_{0.0, 0.0};
  std::array<double, 2> h_{0.0, 0.0};
  std::array<int, 2> n_{0, 0};
  std::int64_t total_nodes_ = 0;
  std::int64_t interior_nodes_ = 0;
};

// Axis-aligned box of grid nodes at distance >= shrink * L_i from the domain
// boundary on every axis.  The masked nodes are all interior.
class InnerMask {
public:
  InnerMask() = default;

  int dim() const noexcept { return dim_; }
  // Inclusive node-index range per axis.
  int first(int axis) const { return ilo_[axis]; }
  int last(int axis) const { return ihi_[axis]; }
  int nodes(int axis) const { return ihi_[axis] - ilo_[axis] + 1; }

  std::int64_t count() const noexcept { return count_; }
  // Distance from the mask to the domain boundary, min over axes.
  double margin() const noexcept { return margin_; }

  bool contains(int i, int j = 0) const noexcept {
    if (i < ilo_[0] || i > ihi_[0]) return false;
    if (dim_ == 2 && (j < ilo_[1] || j > ihi_[1])) return false;
    return true;
  }

  // Linear index of a masked node within the mask box (row-major, x fastest),
  // or -1 if outside.
  std::int64_t mask_index(int i, int j = 0) const noexcept {
    if (!contains(i, j)) return -1;
    return static_cast<std::int64_t>(dim_ == 2 ? (j - ilo_[1]) : 0) * nodes_x_ + (i - ilo_[0]);
  }
  // Inverse: grid (i, j) of a mask-linear index.
  std::array<int, 2> mask_ij(std::int64_t m) const noexcept {
    return {ilo_[0] + static_cast<int>(m % nodes_x_),
            dim_ == 2 ? ilo_[1] + static_cast<int>(m / nodes_x_) : 0};
  }

  // Throws GridError on: shrink outside (0, 0.5), separation below one grid
  // layer (shrink * L_i < h_i), or an empty mask.
  static InnerMask create(const Grid& grid, double shrink);

private:
  int dim_ = 0;
  std::array<int, 2> ilo_{0, 0};
  std::array<int, 2> ihi_{0, 0};
  int nodes_x_ = 0;
  std::int64_t count_ = 0;
  double margin_ = 0.0;
};

}  // namespace freqcover
