#include "gbwave/beam_continuous.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gbwave {

struct ContinuousBeam::Jet {
  double a, a_t, a_tt, lap_a;
  Vec grad_a;
  complex phi, phi_t, phi_tt, lap_phi;
  CVec grad_phi;
};

ContinuousBeam::ContinuousBeam(BeamParams params, double k, double scale)
    : p_(std::move(params)), k_(k), scale_(scale) {
  p_.validate();
  if (!(k >= 1.0) || !std::isfinite(k)) throw std::invalid_argument("high-frequency parameter k must be >= 1");
  v_ = continuous_velocity(p_);
}

double ContinuousBeam::prefactor() const {
  return scale_ * std::pow(k_, 0.25 * p_.dim() - 1.0);
}

ContinuousBeam::Jet ContinuousBeam::jet(const Vec& x, double t) const {
  const int d = p_.dim();
  const Vec y = (x - p_.x0) - v_ * t;
  const CVec My = p_.M0 * y.cast<complex>();
  const double yv = y.dot(v_);
  Jet j;
  j.a = std::exp(-y.squaredNorm());
  j.grad_a = -2.0 * y * j.a;
  j.lap_a = (4.0 * y.squaredNorm() - 2.0 * d) * j.a;
  j.a_t = 2.0 * yv * j.a;
  j.a_tt = (4.0 * yv * yv - 2.0 * v_.squaredNorm()) * j.a;
  j.phi = p_.xi0.dot(y) + 0.5 * y.cast<complex>().dot(My);
  j.grad_phi = p_.xi0.cast<complex>() + My;
  j.lap_phi = p_.M0.trace();
  j.phi_t = -(v_.cast<complex>().transpose() * j.grad_phi)(0);
  j.phi_tt = (v_.cast<complex>().transpose() * p_.M0 * v_.cast<complex>())(0);
  return j;
}

complex ContinuousBeam::phase(const Vec& x, double t) const { return jet(x, t).phi; }

double ContinuousBeam::amplitude(const Vec& x, double t) const { return jet(x, t).a; }

complex ContinuousBeam::value(const Vec& x, double t) const {
  const Jet j = jet(x, t);
  return prefactor() * j.a * std::exp(complex(0.0, k_) * j.phi);
}

complex ContinuousBeam::time_derivative(const Vec& x, double t) const {
  const Jet j = jet(x, t);
  const complex ik(0.0, k_);
  return prefactor() * std::exp(ik * j.phi) * (j.a_t + ik * j.a * j.phi_t);
}

CVec ContinuousBeam::gradient(const Vec& x, double t) const {
  const Jet j = jet(x, t);
  const complex ik(0.0, k_);
  return prefactor() * std::exp(ik * j.phi) * (j.grad_a.cast<complex>() + ik * j.a * j.grad_phi);
}

ContinuousResiduals ContinuousBeam::residuals(const Vec& x, double t) const {
  const Jet j = jet(x, t);
  const double c = p_.c;
  ContinuousResiduals r;
  r.r0 = j.a_tt - c * j.lap_a;
  r.r1 = j.a * (j.phi_tt - c * j.lap_phi) + 2.0 * j.a_t * j.phi_t -
         2.0 * c * (j.grad_a.cast<complex>().transpose() * j.grad_phi)(0);
  r.r2 = (c * (j.grad_phi.transpose() * j.grad_phi)(0) - j.phi_t * j.phi_t) * j.a;
  return r;
}

complex ContinuousBeam::box(const Vec& x, double t) const {
  const ContinuousResiduals r = residuals(x, t);
  const complex ik(0.0, k_);
  return prefactor() * std::exp(ik * phase(x, t)) * (r.r0 + ik * r.r1 + k_ * k_ * r.r2);
}

complex phase_continuous(const BeamParams& p, const Vec& x, double t) {
  return ContinuousBeam(p, 1.0).phase(x, t);
}

double amplitude_continuous(const BeamParams& p, const Vec& x, double t) {
  return ContinuousBeam(p, 1.0).amplitude(x, t);
}

complex eval_beam_continuous(const ContinuousBeam& b, const Vec& x, double t) { return b.value(x, t); }

ContinuousResiduals residuals_continuous(const ContinuousBeam& b, const Vec& x, double t) {
  return b.residuals(x, t);
}

QuadratureBox default_quadrature_box(const ContinuousBeam& b, double t) {
  const double lambda = min_eigenvalue(b.params().M0.imag());
  const double width = 1.0 / std::sqrt(b.k() * lambda);
  // e^(-k lambda r^2) < e^(-40) past the ball of radius k^(-1/4)
  const double radius = std::pow(b.k(), -0.25) + std::sqrt(40.0) * width;
  const Vec centre = b.center(t);
  QuadratureBox box;
  box.lo = centre.array() - radius;
  box.hi = centre.array() + radius;
  box.spacing = width / 8.0;
  return box;
}

namespace {

// Midpoint sum of f over the box; f receives the node position.
template <class Fn>
double midpoint_sum(const QuadratureBox& box, Fn&& f) {
  const int d = static_cast<int>(box.lo.size());
  std::array<long, kMaxDim> n{1, 1};
  std::array<double, kMaxDim> step{1.0, 1.0};
  for (int a = 0; a < d; ++a) {
    n[a] = std::max(1L, static_cast<long>(std::ceil((box.hi[a] - box.lo[a]) / box.spacing)));
    step[a] = (box.hi[a] - box.lo[a]) / static_cast<double>(n[a]);
  }
  const double cell = d == 1 ? step[0] : step[0] * step[1];
  double sum = 0.0;
  Vec x(d);
  for (long i1 = 0; i1 < n[1]; ++i1) {
    if (d == 2) x[1] = box.lo[1] + (static_cast<double>(i1) + 0.5) * step[1];
    for (long i0 = 0; i0 < n[0]; ++i0) {
      x[0] = box.lo[0] + (static_cast<double>(i0) + 0.5) * step[0];
      sum += f(x);
    }
  }
  return sum * cell;
}

double energy_density(const ContinuousBeam& b, const Vec& x, double t) {
  return 0.5 * (std::norm(b.time_derivative(x, t)) + b.params().c * b.gradient(x, t).squaredNorm());
}

}  // namespace

double continuous_residual_norm(const ContinuousBeam& b, double t, const QuadratureBox& box) {
  return std::sqrt(midpoint_sum(box, [&](const Vec& x) { return std::norm(b.box(x, t)); }));
}

double continuous_residual_norm(const ContinuousBeam& b, double t) {
  return continuous_residual_norm(b, t, default_quadrature_box(b, t));
}

double continuous_residual_sup(const ContinuousBeam& b, std::span<const double> times) {
  double best = 0.0;
  for (double t : times) best = std::max(best, continuous_residual_norm(b, t));
  return best;
}

double continuous_energy_estimate(const ContinuousBeam& b, double t, const QuadratureBox& box) {
  return midpoint_sum(box, [&](const Vec& x) { return energy_density(b, x, t); });
}

double continuous_energy_estimate(const ContinuousBeam& b, double t) {
  return continuous_energy_estimate(b, t, default_quadrature_box(b, t));
}

double continuous_offray_fraction(const ContinuousBeam& b, double t) {
  const QuadratureBox box = default_quadrature_box(b, t);
  const Vec centre = b.center(t);
  const double radius = std::pow(b.k(), -0.25);
  const double total = continuous_energy_estimate(b, t, box);
  if (total == 0.0) return 0.0;
  const double outside = midpoint_sum(box, [&](const Vec& x) {
    return (x - centre).norm() > radius ? energy_density(b, x, t) : 0.0;
  });
  return outside / total;
}

double gaussian_moment(int N, double beta, double k, int d) {
  if (N < 0 || d < 1) throw std::invalid_argument("moment order must be >= 0 and dimension >= 1");
  if (!(beta > 0.0) || !(k > 0.0)) throw std::invalid_argument("Gaussian rate must be positive");
  const double half_d = 0.5 * d;
  const double rate = 2.0 * k * beta;
  return std::pow(rate, -half_d - N) * 0.5 * d * std::pow(std::numbers::pi, half_d) *
         std::exp(std::lgamma(half_d + N) - std::lgamma(half_d + 1.0));
}

}  // namespace gbwave
