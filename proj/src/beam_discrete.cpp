#include "gbwave/beam_discrete.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace gbwave {

namespace {

constexpr complex I{0.0, 1.0};

double half_sin_norm(const BeamParams& p) { return (0.5 * p.xi0.array()).sin().matrix().norm(); }

// y^T A z without conjugation.
complex bilinear(const CVec& y, const CMat& a, const CVec& z) { return (y.transpose() * a * z)(0); }

}  // namespace

double ray_phase_rate(const BeamParams& p) {
  return -sign(p.branch) * 2.0 * std::sqrt(p.c) * half_sin_norm(p);
}

double omega_rate(const BeamParams& p) { return p.xi0.dot(fd_velocity(p)) + ray_phase_rate(p); }

RMat riccati_coefficient(const BeamParams& p) {
  // Hessian of the lattice symbol minus the velocity outer product,
  // divided by the phase rate on the ray.
  const Vec v = fd_velocity(p);
  const RMat hessian = (p.c * p.xi0.array().cos()).matrix().asDiagonal();
  return (hessian - v * v.transpose()) / ray_phase_rate(p);
}

double omega_1d(const BeamParams& p, double t) {
  const double s = std::sin(0.5 * p.xi0[0]);
  const double sgn = s > 0 ? 1.0 : (s < 0 ? -1.0 : 0.0);
  return sign(p.branch) * std::sqrt(p.c) *
         (p.xi0[0] * std::cos(0.5 * p.xi0[0]) * sgn - 2.0 * std::abs(s)) * t;
}

complex riccati_M_1d(const BeamParams& p, double t) {
  const complex m0 = p.M0(0, 0);
  const double s = std::abs(std::sin(0.5 * p.xi0[0]));
  return m0 / (1.0 - sign(p.branch) * m0 * std::sqrt(p.c) * 0.5 * s * t);
}

complex amplitude_on_ray_1d(const BeamParams& p, double t) {
  const complex m0 = p.M0(0, 0);
  const double s = std::abs(std::sin(0.5 * p.xi0[0]));
  return std::exp(-0.5 * std::log(1.0 - sign(p.branch) * m0 * std::sqrt(p.c) * 0.5 * s * t));
}

RiccatiTrajectory::RiccatiTrajectory(const BeamParams& p, double horizon, double max_step)
    : coeff_(riccati_coefficient(p)), horizon_(horizon) {
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("Riccati horizon must be >= 0");
  if (!(max_step > 0.0)) throw std::invalid_argument("Riccati step must be positive");
  const auto steps = std::max<long>(1, static_cast<long>(std::ceil(horizon / max_step - 1e-9)));
  step_ = horizon > 0.0 ? horizon / static_cast<double>(steps) : max_step;
  nodes_.reserve(static_cast<std::size_t>(steps) + 1);
  nodes_.push_back({p.M0, complex(0.0)});
  for (long n = 0; n < steps; ++n) {
    Node next = advance(nodes_.back(), step_);
    const double t = static_cast<double>(n + 1) * step_;
    if (!next.M.allFinite() || !(min_eigenvalue(next.M.imag()) > 0.0)) {
      std::ostringstream msg;
      msg << "Riccati integration lost positivity at t = " << t;
      throw std::runtime_error(msg.str());
    }
    nodes_.push_back(std::move(next));
  }
}

RiccatiTrajectory::Node RiccatiTrajectory::advance(const Node& n, double dt) const {
  const CMat q = coeff_.cast<complex>();
  auto rhs = [&](const CMat& m) { return std::pair<CMat, complex>(m * q * m, 0.5 * (q * m).trace()); };
  const auto [k1, l1] = rhs(n.M);
  const auto [k2, l2] = rhs(n.M + 0.5 * dt * k1);
  const auto [k3, l3] = rhs(n.M + 0.5 * dt * k2);
  const auto [k4, l4] = rhs(n.M + dt * k3);
  Node out;
  out.M = n.M + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  out.M = 0.5 * (out.M + out.M.transpose()).eval();
  out.log_amp = n.log_amp + dt / 6.0 * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
  return out;
}

std::pair<CMat, complex> RiccatiTrajectory::at(double t) const {
  if (!(t >= 0.0) || t > horizon_ * (1.0 + 1e-12) + 1e-15) {
    std::ostringstream msg;
    msg << "time " << t << " outside the Riccati horizon [0, " << horizon_ << "]";
    throw std::out_of_range(msg.str());
  }
  const auto i = std::min(nodes_.size() - 1, static_cast<std::size_t>(std::floor(t / step_)));
  const double rest = t - static_cast<double>(i) * step_;
  if (rest <= 0.0) return {nodes_[i].M, nodes_[i].log_amp};
  const Node n = advance(nodes_[i], rest);
  return {n.M, n.log_amp};
}

CMat riccati_M_multiD(const BeamParams& p, double t, double max_step) {
  p.validate();
  return RiccatiTrajectory(p, t, max_step).at(t).first;
}

struct DiscreteBeam::Local {
  Vec y;
  complex log_env;  // -|y|^2 + log_amp
  complex log_env_t;
  complex log_env_tt;
  complex phi;
  complex phi_t;
  complex phi_tt;
  CVec grad_phi;
};

DiscreteBeam::DiscreteBeam(BeamParams params, double h, double horizon, double scale)
    : p_(std::move(params)), h_(h), scale_(scale), horizon_(horizon) {
  p_.validate();
  if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("mesh size h must lie in (0,1)");
  if (p_.M0.real().norm() > 1e-14 * (1.0 + p_.M0.norm()))
    throw std::invalid_argument("lattice beam requires Re M0 = 0");
  if (!(horizon >= 0.0)) throw std::invalid_argument("beam horizon must be >= 0");
  v_ = fd_velocity(p_);
  coeff_ = riccati_coefficient(p_);
  if (p_.dim() > 1) riccati_.emplace(p_, horizon);
}

double DiscreteBeam::prefactor() const { return scale_ * std::pow(h_, 1.0 - 0.25 * p_.dim()); }

PhaseState DiscreteBeam::phase_state(double t) const {
  PhaseState s;
  s.t = t;
  s.omega_dot = omega_rate(p_);
  s.omega = s.omega_dot * t;
  const CMat q = coeff_.cast<complex>();
  if (p_.dim() == 1) {
    const complex m0 = p_.M0(0, 0);
    const complex den = 1.0 - coeff_(0, 0) * m0 * t;
    s.M = CMat::Constant(1, 1, m0 / den);
    s.log_amp = -0.5 * std::log(den);
  } else {
    std::tie(s.M, s.log_amp) = riccati_->at(t);
  }
  s.M_dot = s.M * q * s.M;
  s.M_ddot = s.M_dot * q * s.M + s.M * q * s.M_dot;
  s.log_amp_dot = 0.5 * (q * s.M).trace();
  s.log_amp_ddot = 0.5 * (q * s.M_dot).trace();
  return s;
}

DiscreteBeam::Local DiscreteBeam::local(const PhaseState& s, const Vec& x) const {
  Local l;
  l.y = (x - p_.x0) - v_ * s.t;
  const CVec y = l.y.cast<complex>();
  const CVec v = v_.cast<complex>();
  const CVec My = s.M * y;
  const double yv = l.y.dot(v_);
  l.log_env = -l.y.squaredNorm() + s.log_amp;
  l.log_env_t = 2.0 * yv + s.log_amp_dot;
  l.log_env_tt = -2.0 * v_.squaredNorm() + s.log_amp_ddot;
  l.phi = s.omega + p_.xi0.dot(l.y) + 0.5 * (y.transpose() * My)(0);
  l.phi_t = s.omega_dot - p_.xi0.dot(v_) - (v.transpose() * My)(0) + 0.5 * bilinear(y, s.M_dot, y);
  l.phi_tt = bilinear(v, s.M, v) - 2.0 * bilinear(v, s.M_dot, y) + 0.5 * bilinear(y, s.M_ddot, y);
  l.grad_phi = p_.xi0.cast<complex>() + My;
  return l;
}

BeamJet DiscreteBeam::jet(const PhaseState& s, const Vec& x) const {
  const Local l = local(s, x);
  const double inv_h = 1.0 / h_;
  const complex L_t = l.log_env_t + I * inv_h * l.phi_t;
  const complex L_tt = l.log_env_tt + I * inv_h * l.phi_tt;
  BeamJet j;
  j.u = prefactor() * std::exp(l.log_env + I * inv_h * l.phi);
  j.u_t = j.u * L_t;
  j.u_tt = j.u * (L_tt + L_t * L_t);
  return j;
}

complex DiscreteBeam::phase(const Vec& x, double t) const { return local(phase_state(t), x).phi; }

CVec DiscreteBeam::phase_gradient(const Vec& x, double t) const { return local(phase_state(t), x).grad_phi; }

complex DiscreteBeam::phase_time_derivative(const Vec& x, double t) const {
  return local(phase_state(t), x).phi_t;
}

complex DiscreteBeam::amplitude(const Vec& x, double t) const {
  return scale_ * std::exp(local(phase_state(t), x).log_env);
}

complex DiscreteBeam::value(const Vec& x, double t) const { return jet(phase_state(t), x).u; }

complex DiscreteBeam::time_derivative(const Vec& x, double t) const { return jet(phase_state(t), x).u_t; }

complex DiscreteBeam::eikonal_residual(const Vec& x, double t) const {
  const Local l = local(phase_state(t), x);
  return eikonal_residual_fd(l.grad_phi, l.phi_t, p_.c);
}

void DiscreteBeam::sample(const Grid& g, double t, ComplexField* u, ComplexField* u_t,
                          ComplexField* u_tt) const {
  if (g.dim() != p_.dim()) throw std::invalid_argument("grid and beam dimensions differ");
  for (ComplexField* f : {u, u_t, u_tt})
    if (f && !(f->grid == g)) *f = ComplexField(g);
  const PhaseState s = phase_state(t);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const BeamJet bj = jet(s, g.point(j));
    if (u) (*u)[j] = bj.u;
    if (u_t) (*u_t)[j] = bj.u_t;
    if (u_tt) (*u_tt)[j] = bj.u_tt;
  }
}

ComplexField DiscreteBeam::sample(const Grid& g, double t) const {
  ComplexField u(g);
  sample(g, t, &u);
  return u;
}

DiscreteResiduals DiscreteBeam::residuals(long j, double t) const {
  if (p_.dim() != 1) throw std::invalid_argument("residual split is defined for d = 1");
  const PhaseState s = phase_state(t);
  const double h = h_;
  const double c = p_.c;
  const double x = static_cast<double>(j) * h;
  const Local lm = local(s, vec1(x - h));
  const Local l0 = local(s, vec1(x));
  const Local lp = local(s, vec1(x + h));
  const complex Am = scale_ * std::exp(lm.log_env);
  const complex A = scale_ * std::exp(l0.log_env);
  const complex Ap = scale_ * std::exp(lp.log_env);

  const complex dA = (Ap - Am) / (2.0 * h);
  const complex lapA = c * (Ap - 2.0 * A + Am) / (h * h);
  const complex dPhi = (lp.phi - lm.phi) / (2.0 * h);
  const complex lapPhi = c * (lp.phi - 2.0 * l0.phi + lm.phi) / (h * h);
  const complex A_t = A * l0.log_env_t;
  const complex A_tt = A * (l0.log_env_tt + l0.log_env_t * l0.log_env_t);
  const complex A_x = -2.0 * l0.y[0] * A;
  const complex phi_x = l0.grad_phi[0];
  const complex phi_xx = s.M(0, 0);

  DiscreteResiduals r;
  r.R0 = A_tt - lapA;
  const complex q = h * lapPhi / (2.0 * c);
  r.R1 = 2.0 * A_t * l0.phi_t - 2.0 * c * dA * std::sin(dPhi) * std::exp(I * q) +
         A * (l0.phi_tt - std::cos(dPhi) * (4.0 * c / h) * std::sin(0.5 * q) * std::exp(0.5 * I * q));
  const complex half = std::sin(0.5 * dPhi);
  r.R2 = 4.0 * c * half * half - l0.phi_t * l0.phi_t;
  r.Rfd = eikonal_residual_fd(l0.grad_phi, l0.phi_t, c);
  r.R1_continuous = 2.0 * A_t * l0.phi_t - 2.0 * c * A_x * std::sin(phi_x) +
                    A * (l0.phi_tt - c * std::cos(phi_x) * phi_xx);
  const complex fwd = (lp.phi - l0.phi) / h;
  const complex bwd = (l0.phi - lm.phi) / h;
  r.cross = 0.5 * lapA * (2.0 - std::exp(I * fwd) - std::exp(-I * bwd));
  return r;
}

double DiscreteBeam::min_envelope_curvature(double T) const {
  constexpr int samples = 200;
  double best = min_eigenvalue(p_.M0.imag());
  for (int i = 1; i <= samples; ++i) {
    const double t = T * i / samples;
    best = std::min(best, min_eigenvalue(phase_state(t).M.imag()));
  }
  return best;
}

complex phase_discrete(const BeamParams& p, const Vec& x, double t) {
  return DiscreteBeam(p, 0.5, t).phase(x, t);
}

complex amplitude_discrete(const BeamParams& p, const Vec& x, double t) {
  return DiscreteBeam(p, 0.5, t).amplitude(x, t);
}

complex eval_beam_discrete(const DiscreteBeam& b, const Vec& x, double t) { return b.value(x, t); }

complex eval_beam_discrete_dt(const DiscreteBeam& b, const Vec& x, double t) {
  return b.time_derivative(x, t);
}

DiscreteResiduals residuals_discrete(const DiscreteBeam& b, long j, double t) { return b.residuals(j, t); }

complex eikonal_residual_fd(const CVec& grad_phase, complex phase_t, double c) {
  complex sum = 0.0;
  for (Eigen::Index i = 0; i < grad_phase.size(); ++i) {
    const complex s = std::sin(0.5 * grad_phase[i]);
    sum += s * s;
  }
  return 4.0 * c * sum - phase_t * phase_t;
}

Grid truncation_box(const DiscreteBeam& b, double T) {
  const double radius = 1.1 * std::sqrt(b.h() * std::log(1e14) / b.min_envelope_curvature(T));
  const Vec a = b.center(0.0);
  const Vec e = b.center(T);
  const Vec lo = a.cwiseMin(e).array() - radius;
  const Vec hi = a.cwiseMax(e).array() + radius;
  return Grid::covering(b.h(), lo, hi);
}

AnsatzSnapshot ansatz_snapshot(const DiscreteBeam& b, const Grid& box, double t, double radius_exponent) {
  if (box.h() != b.h()) throw std::invalid_argument("box step differs from beam mesh size");
  const int d = box.dim();
  const double h = box.h();
  const double c = b.params().c;
  // One extra layer of nodes supplies exact lattice neighbours.
  Vec lo(d);
  std::array<std::size_t, kMaxDim> counts{1, 1};
  for (int a = 0; a < d; ++a) {
    lo[a] = box.lo(a) - h;
    counts[a] = box.count(a) + 2;
  }
  const Grid padded(h, lo, counts);
  ComplexField u, u_t, u_tt;
  b.sample(padded, t, &u, &u_t, &u_tt);
  const ComplexField lap = discrete_laplacian(u, c);
  std::array<ComplexField, kMaxDim> grad;
  for (int a = 0; a < d; ++a) grad[a] = forward_diff(u, a);

  const Vec centre = b.center(t);
  const double radius = std::pow(h, radius_exponent);
  double res = 0.0, energy = 0.0, off = 0.0;
  for (std::size_t j = 0; j < padded.size(); ++j) {
    if (!padded.is_interior(j)) continue;
    res += std::norm(u_tt[j] - lap[j]);
    double e = std::norm(u_t[j]);
    for (int a = 0; a < d; ++a) e += c * std::norm(grad[a][j]);
    energy += e;
    if ((padded.point(j) - centre).norm() > radius) off += e;
  }
  const double w = padded.cell_volume();
  return {std::sqrt(w * res), 0.5 * w * energy, 0.5 * w * off};
}

double residual_sup_norm(const DiscreteBeam& b, const Grid& box, std::span<const double> times) {
  double best = 0.0;
  for (double t : times) best = std::max(best, ansatz_snapshot(b, box, t).residual);
  return best;
}

double offray_energy(const DiscreteBeam& b, const Grid& box, double t, double radius_exponent) {
  return ansatz_snapshot(b, box, t, radius_exponent).offray_energy;
}

}  // namespace gbwave
