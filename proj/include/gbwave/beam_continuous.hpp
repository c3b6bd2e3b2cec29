#pragma once

#include <span>

#include "gbwave/rays.hpp"

namespace gbwave {

struct ContinuousResiduals {
  complex r0;  // box applied to the amplitude
  complex r1;  // order-k coefficient
  complex r2;  // order-k^2 coefficient (eikonal defect times amplitude)
};

/// Gaussian beam k^(d/4-1) a e^(ik phi) for u_tt = c Laplacian u.
class ContinuousBeam {
 public:
  /// scale multiplies the whole ansatz (0 gives the trivial beam).
  ContinuousBeam(BeamParams params, double k, double scale = 1.0);

  const BeamParams& params() const { return p_; }
  double k() const { return k_; }
  Vec center(double t) const { return p_.x0 + v_ * t; }
  const Vec& velocity() const { return v_; }

  complex phase(const Vec& x, double t) const;
  double amplitude(const Vec& x, double t) const;
  complex value(const Vec& x, double t) const;
  complex time_derivative(const Vec& x, double t) const;
  CVec gradient(const Vec& x, double t) const;
  ContinuousResiduals residuals(const Vec& x, double t) const;
  /// u_tt - c Laplacian u, assembled from the residual split.
  complex box(const Vec& x, double t) const;

 private:
  struct Jet;
  Jet jet(const Vec& x, double t) const;
  double prefactor() const;

  BeamParams p_;
  double k_;
  double scale_;
  Vec v_;
};

complex phase_continuous(const BeamParams& p, const Vec& x, double t);
double amplitude_continuous(const BeamParams& p, const Vec& x, double t);
complex eval_beam_continuous(const ContinuousBeam& b, const Vec& x, double t);
ContinuousResiduals residuals_continuous(const ContinuousBeam& b, const Vec& x, double t);

/// Tensor-product midpoint rule centred on the ray.
struct QuadratureBox {
  Vec lo;
  Vec hi;
  double spacing = 0.0;
};

/// Box wide enough for the envelope and the off-ray ball, with spacing
/// at most (k min eig Im M0)^(-1/2)/8.
QuadratureBox default_quadrature_box(const ContinuousBeam& b, double t);

/// L2 norm of the wave operator applied to the beam at time t.
double continuous_residual_norm(const ContinuousBeam& b, double t);
double continuous_residual_norm(const ContinuousBeam& b, double t, const QuadratureBox& box);

/// sup over the listed times.
double continuous_residual_sup(const ContinuousBeam& b, std::span<const double> times);

double continuous_energy_estimate(const ContinuousBeam& b, double t);
double continuous_energy_estimate(const ContinuousBeam& b, double t, const QuadratureBox& box);

/// Energy share outside the ball of radius k^(-1/4) around the ray.
double continuous_offray_fraction(const ContinuousBeam& b, double t);

/// Closed form of the integral of |y|^(2N) e^(-2 k beta |y|^2) over R^d.
double gaussian_moment(int N, double beta, double k, int d);

}  // namespace gbwave
