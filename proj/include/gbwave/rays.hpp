#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gbwave/small.hpp"

namespace gbwave {

enum class Branch { plus, minus };

constexpr double sign(Branch b) { return b == Branch::plus ? 1.0 : -1.0; }

enum class RayKind { continuous, finite_difference };

/// Inputs shared by the continuous and lattice beams.
struct BeamParams {
  Vec x0;
  Vec xi0;
  double c = 1.0;
  CMat M0;  // complex symmetric, positive definite imaginary part
  Branch branch = Branch::plus;

  int dim() const { return static_cast<int>(x0.size()); }

  static BeamParams line(double x0, double xi0, double c = 1.0, complex m0 = {0.0, 1.0},
                         Branch branch = Branch::plus);
  static BeamParams plane(const Vec& x0, const Vec& xi0, double c = 1.0, complex m0 = {0.0, 1.0},
                          Branch branch = Branch::plus);

  /// Throws std::invalid_argument naming the violated condition.
  void validate() const;
};

/// Smallest eigenvalue of the real symmetric matrix.
double min_eigenvalue(const RMat& m);

struct RayPath {
  BeamParams params;
  RayKind kind = RayKind::finite_difference;
  std::vector<std::pair<double, Vec>> samples;
};

Vec continuous_velocity(const BeamParams& p);
Vec continuous_ray(const BeamParams& p, double t);

/// Velocity of the lattice ray; rejects sin(xi0/2) = 0.
Vec fd_velocity(const BeamParams& p);
Vec fd_ray(const BeamParams& p, double t);

Vec ray_position(const BeamParams& p, RayKind kind, double t);

/// count >= 2 equally spaced samples on [0, T].
RayPath sample_ray(const BeamParams& p, RayKind kind, double T, std::size_t count);

double group_velocity_fd(const Vec& xi0, double c);

struct HamiltonianState {
  Vec x;
  double t = 0.0;
  Vec xi;
  double tau = 0.0;
};

double principal_symbol(RayKind kind, const Vec& xi, double tau, double c);

/// Bicharacteristic start with tau chosen on the symbol's zero set so
/// that the ray moves along the requested branch.
HamiltonianState initial_state(RayKind kind, const BeamParams& p);

/// Throws if |P(xi, tau)| exceeds tol.
void check_constraint(RayKind kind, const HamiltonianState& s, double c, double tol = 1e-10);

/// Derivative of (x, t, xi, tau) with respect to the ray parameter.
HamiltonianState hamiltonian_rhs(RayKind kind, const HamiltonianState& s, double c);

// Dispersion analysis of the 1-D lattice symbol.

/// Coefficient of x^(2n+1) in sin(x/2).
double taylor_beta(int n);

/// Coefficient of x^(2n+2) in sin^2(x/2).
double taylor_gamma(int n);

/// -tau^2 + c xi^2 + 4c sum_{n=1..N} gamma_n h^(2n) xi^(2n+2).
double partial_symbol(double xi, double tau, double c, double h, int N);

/// -tau^2 + (4c/h^2) sin^2(h xi / 2).
double fd_symbol_1d(double xi, double tau, double c, double h);

/// c_N / c = 1 + 4 sum_{n=1..N} gamma_n.
double velocity_factor(int N);

/// Numerically summed limit of velocity_factor.
double velocity_factor_limit();

}  // namespace gbwave
