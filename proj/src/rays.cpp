#include "gbwave/rays.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace gbwave {

namespace {

Vec half_sin(const Vec& xi) { return (0.5 * xi.array()).sin().matrix(); }
Vec half_cos(const Vec& xi) { return (0.5 * xi.array()).cos().matrix(); }

}  // namespace

BeamParams BeamParams::line(double x0, double xi0, double c, complex m0, Branch branch) {
  return BeamParams{vec1(x0), vec1(xi0), c, scalar_matrix(m0, 1), branch};
}

BeamParams BeamParams::plane(const Vec& x0, const Vec& xi0, double c, complex m0, Branch branch) {
  return BeamParams{x0, xi0, c, scalar_matrix(m0, static_cast<int>(x0.size())), branch};
}

double min_eigenvalue(const RMat& m) {
  if (m.rows() == 1) return m(0, 0);
  Eigen::SelfAdjointEigenSolver<RMat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void BeamParams::validate() const {
  const int d = dim();
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("beam dimension must be 1 or 2");
  if (xi0.size() != d) throw std::invalid_argument("xi0 has wrong dimension");
  if (M0.rows() != d || M0.cols() != d) throw std::invalid_argument("M0 has wrong shape");
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("wave speed c must be positive");
  if (!x0.allFinite() || !xi0.allFinite() || !M0.allFinite())
    throw std::invalid_argument("beam parameters must be finite");
  if (!(xi0.norm() > 0.0)) throw std::invalid_argument("xi0 must be nonzero");
  if ((M0 - M0.transpose()).norm() > 1e-14 * (1.0 + M0.norm()))
    throw std::invalid_argument("M0 must be symmetric");
  if (!(min_eigenvalue(M0.imag()) > 0.0))
    throw std::invalid_argument("Im M0 must be positive definite");
}

Vec continuous_velocity(const BeamParams& p) {
  const double n = p.xi0.norm();
  if (!(n > 0.0)) throw std::invalid_argument("xi0 must be nonzero");
  return sign(p.branch) * std::sqrt(p.c) * p.xi0 / n;
}

Vec continuous_ray(const BeamParams& p, double t) { return p.x0 + continuous_velocity(p) * t; }

Vec fd_velocity(const BeamParams& p) {
  const Vec s = half_sin(p.xi0);
  const double n = s.norm();
  // sin(m pi) is only zero to rounding in floating point
  if (!(n > 1e-12)) throw std::invalid_argument("sin(xi0/2) vanishes: lattice ray direction undefined");
  return sign(p.branch) * std::sqrt(p.c) * half_cos(p.xi0).cwiseProduct(s) / n;
}

Vec fd_ray(const BeamParams& p, double t) { return p.x0 + fd_velocity(p) * t; }

Vec ray_position(const BeamParams& p, RayKind kind, double t) {
  return kind == RayKind::continuous ? continuous_ray(p, t) : fd_ray(p, t);
}

RayPath sample_ray(const BeamParams& p, RayKind kind, double T, std::size_t count) {
  if (count < 2) throw std::invalid_argument("ray sampling needs at least two points");
  RayPath path{p, kind, {}};
  path.samples.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = T * static_cast<double>(i) / static_cast<double>(count - 1);
    path.samples.emplace_back(t, ray_position(p, kind, t));
  }
  return path;
}

double group_velocity_fd(const Vec& xi0, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("wave speed c must be positive");
  if (xi0.size() == 1) return std::sqrt(c) * std::abs(std::cos(0.5 * xi0[0]));
  const Vec s = half_sin(xi0);
  const double n = s.norm();
  if (!(n > 0.0)) return std::sqrt(c);
  return std::sqrt(c) * half_cos(xi0).cwiseProduct(s).norm() / n;
}

double principal_symbol(RayKind kind, const Vec& xi, double tau, double c) {
  if (kind == RayKind::continuous) return -tau * tau + c * xi.squaredNorm();
  return -tau * tau + 4.0 * c * half_sin(xi).squaredNorm();
}

HamiltonianState initial_state(RayKind kind, const BeamParams& p) {
  // dx/dt = grad_xi P / (-2 tau), so tau < 0 moves along +grad_xi P.
  const double spatial = principal_symbol(kind, p.xi0, 0.0, p.c);
  HamiltonianState s{p.x0, 0.0, p.xi0, -sign(p.branch) * std::sqrt(spatial)};
  check_constraint(kind, s, p.c);
  return s;
}

void check_constraint(RayKind kind, const HamiltonianState& s, double c, double tol) {
  const double r = principal_symbol(kind, s.xi, s.tau, c);
  if (!(std::abs(r) <= tol))
    throw std::invalid_argument("initial bicharacteristic is off the symbol zero set (P = " +
                                std::to_string(r) + ")");
}

HamiltonianState hamiltonian_rhs(RayKind kind, const HamiltonianState& s, double c) {
  HamiltonianState d;
  d.x = kind == RayKind::continuous ? Vec(2.0 * c * s.xi) : Vec(2.0 * c * s.xi.array().sin().matrix());
  d.t = -2.0 * s.tau;
  d.xi = Vec::Zero(s.xi.size());
  d.tau = 0.0;
  return d;
}

double taylor_beta(int n) {
  if (n < 0) throw std::invalid_argument("series index must be nonnegative");
  double b = 0.5;
  for (int m = 1; m <= n; ++m) b *= -1.0 / (4.0 * (2.0 * m) * (2.0 * m + 1.0));
  return b;
}

double taylor_gamma(int n) {
  if (n < 0) throw std::invalid_argument("series index must be nonnegative");
  double g = 0.0;
  for (int m = 0; m <= n; ++m) g += taylor_beta(m) * taylor_beta(n - m);
  return g;
}

double partial_symbol(double xi, double tau, double c, double h, int N) {
  double sum = 0.0;
  const double x2 = (h * xi) * (h * xi);
  double power = x2;  // (h xi)^(2n)
  for (int n = 1; n <= N; ++n, power *= x2) sum += taylor_gamma(n) * power;
  return -tau * tau + c * xi * xi + 4.0 * c * sum * xi * xi;
}

double fd_symbol_1d(double xi, double tau, double c, double h) {
  const double s = std::sin(0.5 * h * xi);
  return -tau * tau + 4.0 * c * s * s / (h * h);
}

double velocity_factor(int N) {
  double sum = 0.0;
  for (int n = 1; n <= N; ++n) sum += taylor_gamma(n);
  return 1.0 + 4.0 * sum;
}

double velocity_factor_limit() {
  double prev = velocity_factor(1);
  for (int N = 2; N < 64; ++N) {
    const double next = velocity_factor(N);
    if (next == prev) return next;
    prev = next;
  }
  return prev;
}

}  // namespace gbwave
