#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "gbwave/small.hpp"

namespace gbwave {

/// Uniform lattice box with step h in d <= 2 dimensions.
///
/// Node coordinates are x_i = lo + i*h per axis. Flat indices are
/// row-major with axis 0 varying fastest.
class Grid {
 public:
  Grid() = default;
  Grid(double h, const Vec& lo, const std::array<std::size_t, kMaxDim>& counts);

  /// Smallest box on the lattice hZ^d containing [lo, hi].
  static Grid covering(double h, const Vec& lo, const Vec& hi);

  double h() const { return h_; }
  int dim() const { return dim_; }
  std::size_t count(int axis) const { return counts_[check_axis(axis)]; }
  std::size_t size() const;
  std::size_t stride(int axis) const { return axis == 0 ? 1 : counts_[0]; }
  double lo(int axis) const { return lo_[check_axis(axis)]; }
  double hi(int axis) const { return lo(axis) + static_cast<double>(count(axis) - 1) * h_; }
  double cell_volume() const;

  double coord(int axis, std::size_t i) const { return lo_[axis] + static_cast<double>(i) * h_; }
  std::array<std::size_t, kMaxDim> unravel(std::size_t flat) const;
  Vec point(std::size_t flat) const;

  /// True when every neighbour of the node lies inside the box.
  bool is_interior(std::size_t flat) const;

  /// Same shape, origin moved by whole cells.
  Grid shifted(const std::array<long, kMaxDim>& cells) const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.h_ == b.h_ && a.dim_ == b.dim_ && a.lo_ == b.lo_ && a.counts_ == b.counts_;
  }

 private:
  int check_axis(int axis) const {
    if (axis < 0 || axis >= dim_) throw std::out_of_range("axis " + std::to_string(axis) + " out of range");
    return axis;
  }

  double h_ = 1.0;
  int dim_ = 1;
  std::array<double, kMaxDim> lo_{};
  std::array<std::size_t, kMaxDim> counts_{1, 1};
};

}  // namespace gbwave
