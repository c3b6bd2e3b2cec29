#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>

#include <Eigen/Core>

#include "gbwave/grid.hpp"

namespace gbwave {

/// Values of type Scalar on the nodes of a Grid.
template <class Scalar>
struct Field {
  using Values = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Grid grid;
  Values values;

  Field() = default;
  explicit Field(Grid g) : grid(std::move(g)), values(Values::Zero(static_cast<Eigen::Index>(grid.size()))) {}
  Field(Grid g, Values v) : grid(std::move(g)), values(std::move(v)) {
    if (static_cast<std::size_t>(values.size()) != grid.size())
      throw std::invalid_argument("field length does not match grid");
  }

  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
  Scalar& operator[](std::size_t i) { return values[static_cast<Eigen::Index>(i)]; }
  const Scalar& operator[](std::size_t i) const { return values[static_cast<Eigen::Index>(i)]; }
};

using ComplexField = Field<std::complex<double>>;
using RealField = Field<double>;

namespace detail {

// Calls fn(start, stride, count) once for every grid line parallel to axis.
template <class Fn>
void for_each_line(const Grid& g, int axis, Fn&& fn) {
  const std::size_t n = g.count(axis);
  const std::size_t s = g.stride(axis);
  const std::size_t lines = g.size() / n;
  for (std::size_t l = 0; l < lines; ++l) fn(axis == 0 ? l * n : l, s, n);
}

inline void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw std::invalid_argument("fields live on different grids");
}

}  // namespace detail

// Stencils below treat nodes outside the box as zero.

template <class Scalar>
Field<Scalar> forward_diff(const Field<Scalar>& f, int axis) {
  Field<Scalar> out(f.grid);
  const double inv_h = 1.0 / f.grid.h();
  detail::for_each_line(f.grid, axis, [&](std::size_t start, std::size_t s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = start + i * s;
      const Scalar next = i + 1 < n ? f[j + s] : Scalar(0);
      out[j] = (next - f[j]) * inv_h;
    }
  });
  return out;
}

template <class Scalar>
Field<Scalar> backward_diff(const Field<Scalar>& f, int axis) {
  Field<Scalar> out(f.grid);
  const double inv_h = 1.0 / f.grid.h();
  detail::for_each_line(f.grid, axis, [&](std::size_t start, std::size_t s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = start + i * s;
      const Scalar prev = i > 0 ? f[j - s] : Scalar(0);
      out[j] = (f[j] - prev) * inv_h;
    }
  });
  return out;
}

template <class Scalar>
Field<Scalar> centered_diff(const Field<Scalar>& f, int axis) {
  Field<Scalar> out(f.grid);
  const double inv_2h = 0.5 / f.grid.h();
  detail::for_each_line(f.grid, axis, [&](std::size_t start, std::size_t s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = start + i * s;
      const Scalar next = i + 1 < n ? f[j + s] : Scalar(0);
      const Scalar prev = i > 0 ? f[j - s] : Scalar(0);
      out[j] = (next - prev) * inv_2h;
    }
  });
  return out;
}

/// out = Delta_{c,h} f. out must already live on f's grid.
template <class Scalar>
void discrete_laplacian_into(const Field<Scalar>& f, double c, Field<Scalar>& out) {
  if (!(c > 0.0)) throw std::invalid_argument("wave speed must be positive");
  detail::require_same_grid(f.grid, out.grid);
  const double w = c / (f.grid.h() * f.grid.h());
  out.values.setZero();
  for (int axis = 0; axis < f.grid.dim(); ++axis) {
    detail::for_each_line(f.grid, axis, [&](std::size_t start, std::size_t s, std::size_t n) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = start + i * s;
        const Scalar next = i + 1 < n ? f[j + s] : Scalar(0);
        const Scalar prev = i > 0 ? f[j - s] : Scalar(0);
        out[j] += w * (next - 2.0 * f[j] + prev);
      }
    });
  }
}

template <class Scalar>
Field<Scalar> discrete_laplacian(const Field<Scalar>& f, double c) {
  Field<Scalar> out(f.grid);
  discrete_laplacian_into(f, c, out);
  return out;
}

/// (h^d sum |f_j|^2)^(1/2)
template <class Scalar>
double l2_norm(const Field<Scalar>& f) {
  return std::sqrt(f.grid.cell_volume() * f.values.squaredNorm());
}

/// Quadratic lattice energy of u with time derivative samples v.
template <class Scalar>
double semidiscrete_energy(const Field<Scalar>& u, const Field<Scalar>& v, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("wave speed must be positive");
  detail::require_same_grid(u.grid, v.grid);
  double grad = 0.0;
  for (int axis = 0; axis < u.grid.dim(); ++axis) grad += forward_diff(u, axis).values.squaredNorm();
  return 0.5 * u.grid.cell_volume() * (v.values.squaredNorm() + c * grad);
}

}  // namespace gbwave
