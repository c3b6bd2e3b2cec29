#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gbwave/lattice.hpp"
#include "gbwave/rays.hpp"

namespace gbwave {

/// Time-dependent part of the lattice beam phase and amplitude.
///
/// log_amp is the logarithm of the amplitude on the ray; the full
/// amplitude is e^(-|x - x_fd(t)|^2 + log_amp).
struct PhaseState {
  double t = 0.0;
  double omega = 0.0;
  double omega_dot = 0.0;
  CMat M;
  CMat M_dot;
  CMat M_ddot;
  complex log_amp;
  complex log_amp_dot;
  complex log_amp_ddot;
};

/// d/dt of the phase along the lattice ray (constant in time).
double ray_phase_rate(const BeamParams& p);

/// omega'(t); omega(t) = omega_rate * t.
double omega_rate(const BeamParams& p);

/// Coefficient matrix Q of the Riccati equation M' = M Q M.
RMat riccati_coefficient(const BeamParams& p);

double omega_1d(const BeamParams& p, double t);
complex riccati_M_1d(const BeamParams& p, double t);
/// Amplitude on the ray, e^(log_amp).
complex amplitude_on_ray_1d(const BeamParams& p, double t);

/// Fixed-step RK4 solution of the matrix Riccati equation together with
/// the log amplitude, symmetrized after every step.
class RiccatiTrajectory {
 public:
  RiccatiTrajectory(const BeamParams& p, double horizon, double max_step = 1e-3);

  double horizon() const { return horizon_; }
  /// M(t) and log_amp(t); t must lie in [0, horizon].
  std::pair<CMat, complex> at(double t) const;

 private:
  struct Node {
    CMat M;
    complex log_amp;
  };
  Node advance(const Node& n, double dt) const;

  RMat coeff_;
  double horizon_;
  double step_;
  std::vector<Node> nodes_;
};

CMat riccati_M_multiD(const BeamParams& p, double t, double max_step = 1e-3);

/// u, u_t, u_tt of the ansatz at one point.
struct BeamJet {
  complex u;
  complex u_t;
  complex u_tt;
};

/// Residual split of the lattice wave operator applied to the 1-D
/// ansatz at a node; see DiscreteBeam::residuals.
struct DiscreteResiduals {
  complex R0;
  complex R1;
  complex R2;
  complex Rfd;
  complex R1_continuous;  // R1 with lattice differences replaced by derivatives
  complex cross;          // term dropped from the lattice product rule
};

/// Lattice Gaussian beam h^(1-d/4) A e^(i Phi / h) with k = 1/h.
class DiscreteBeam {
 public:
  /// horizon bounds the times the beam may be evaluated at in d >= 2.
  /// scale multiplies the whole ansatz (0 gives the trivial beam).
  DiscreteBeam(BeamParams params, double h, double horizon = 1.0, double scale = 1.0);

  const BeamParams& params() const { return p_; }
  double h() const { return h_; }
  int dim() const { return p_.dim(); }
  const Vec& velocity() const { return v_; }
  Vec center(double t) const { return p_.x0 + v_ * t; }

  PhaseState phase_state(double t) const;

  complex phase(const Vec& x, double t) const;
  CVec phase_gradient(const Vec& x, double t) const;
  complex phase_time_derivative(const Vec& x, double t) const;
  complex amplitude(const Vec& x, double t) const;
  complex value(const Vec& x, double t) const;
  complex time_derivative(const Vec& x, double t) const;
  /// 4c sum sin^2(d_i Phi / 2) - (Phi_t)^2 with continuous derivatives.
  complex eikonal_residual(const Vec& x, double t) const;

  BeamJet jet(const PhaseState& s, const Vec& x) const;

  /// Samples on every node of g; null outputs are skipped.
  void sample(const Grid& g, double t, ComplexField* u, ComplexField* u_t = nullptr,
              ComplexField* u_tt = nullptr) const;
  ComplexField sample(const Grid& g, double t) const;

  /// Residual split at x_j = j h (d = 1): the lattice wave operator equals
  /// e^(i Phi_j/h) [h^(3/4)(R0 + cross) + i h^(-1/4) R1 + h^(-5/4) A_j R2].
  DiscreteResiduals residuals(long j, double t) const;

  /// Smallest eigenvalue of Im M(t) over [0, T].
  double min_envelope_curvature(double T) const;

 private:
  struct Local;
  Local local(const PhaseState& s, const Vec& x) const;
  double prefactor() const;

  BeamParams p_;
  double h_;
  double scale_;
  double horizon_;
  Vec v_;
  RMat coeff_;
  std::optional<RiccatiTrajectory> riccati_;
};

complex phase_discrete(const BeamParams& p, const Vec& x, double t);
complex amplitude_discrete(const BeamParams& p, const Vec& x, double t);
complex eval_beam_discrete(const DiscreteBeam& b, const Vec& x, double t);
complex eval_beam_discrete_dt(const DiscreteBeam& b, const Vec& x, double t);
DiscreteResiduals residuals_discrete(const DiscreteBeam& b, long j, double t);

/// 4c sum sin^2(g_i/2) - phi_t^2.
complex eikonal_residual_fd(const CVec& grad_phase, complex phase_t, double c);

/// Lattice box holding the beam envelope over [0, T]: the swept ray plus
/// sqrt(h ln(1e14) / min Im M) widened by 10%.
Grid truncation_box(const DiscreteBeam& b, double T);

/// Lattice quantities of the ansatz at one time on the nodes of box.
/// Neighbours outside the box are evaluated from the ansatz itself.
struct AnsatzSnapshot {
  double residual = 0.0;       // l2 norm of u_tt - Delta_{c,h} u
  double energy = 0.0;         // semidiscrete energy
  double offray_energy = 0.0;  // part with |x_j - x_fd(t)| > h^radius_exponent
};

AnsatzSnapshot ansatz_snapshot(const DiscreteBeam& b, const Grid& box, double t,
                               double radius_exponent = 0.25);

double residual_sup_norm(const DiscreteBeam& b, const Grid& box, std::span<const double> times);
double offray_energy(const DiscreteBeam& b, const Grid& box, double t, double radius_exponent = 0.25);

}  // namespace gbwave
