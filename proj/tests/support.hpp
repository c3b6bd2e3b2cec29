#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "gbwave/lattice.hpp"
#include "gbwave/rays.hpp"

namespace gbtest {

using gbwave::complex;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }

inline gbwave::ComplexField random_field(const gbwave::Grid& g) {
  gbwave::ComplexField f(g);
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = complex(uniform(-1, 1), uniform(-1, 1));
  return f;
}

// max |a - b| over interior nodes divided by max |a| there
inline double interior_rel_diff(const gbwave::ComplexField& a, const gbwave::ComplexField& b) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (!a.grid.is_interior(j)) continue;
    diff = std::max(diff, std::abs(a[j] - b[j]));
    scale = std::max(scale, std::abs(a[j]));
  }
  return diff / scale;
}

inline double rel(complex a, complex b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// Classical RK4 for the bicharacteristic system; test oracle only.
inline gbwave::HamiltonianState rk4(gbwave::RayKind kind, gbwave::HamiltonianState s, double c, double ds) {
  using gbwave::HamiltonianState;
  auto axpy = [](const HamiltonianState& a, double w, const HamiltonianState& d) {
    return HamiltonianState{a.x + w * d.x, a.t + w * d.t, a.xi + w * d.xi, a.tau + w * d.tau};
  };
  const auto k1 = gbwave::hamiltonian_rhs(kind, s, c);
  const auto k2 = gbwave::hamiltonian_rhs(kind, axpy(s, 0.5 * ds, k1), c);
  const auto k3 = gbwave::hamiltonian_rhs(kind, axpy(s, 0.5 * ds, k2), c);
  const auto k4 = gbwave::hamiltonian_rhs(kind, axpy(s, ds, k3), c);
  s = axpy(s, ds / 6.0, k1);
  s = axpy(s, ds / 3.0, k2);
  s = axpy(s, ds / 3.0, k3);
  return axpy(s, ds / 6.0, k4);
}

}  // namespace gbtest
