#include "gbwave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gbwave {

SimulationConfig SimulationConfig::around(const DiscreteBeam& beam, double mu, double T) {
  return SimulationConfig{truncation_box(beam, T), beam, mu, T, 1, 0.25, {}};
}

std::int64_t SimulationConfig::steps() const {
  return static_cast<std::int64_t>(std::ceil(T / time_step() - 1e-9));
}

void SimulationConfig::validate() const {
  if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("CFL ratio must lie in (0,1)");
  if (!(mu * std::sqrt(c() * grid.dim()) < 1.0))
    throw std::invalid_argument("time step violates the leapfrog stability bound mu*sqrt(c*d) < 1");
  if (grid.h() != beam.h() || grid.dim() != beam.dim())
    throw std::invalid_argument("beam grid mismatch: grid step or dimension differs from the beam");
  if (!(T >= 0.0) || !std::isfinite(T)) throw std::invalid_argument("final time must be >= 0");
  if (cadence < 1) throw std::invalid_argument("diagnostics cadence must be >= 1");
}

SolverState init_from_beam(const DiscreteBeam& beam, const SimulationConfig& cfg) {
  cfg.validate();
  if (&beam != &cfg.beam && (beam.h() != cfg.grid.h() || beam.dim() != cfg.grid.dim()))
    throw std::invalid_argument("beam grid mismatch: grid step or dimension differs from the beam");
  const double dt = cfg.time_step();
  SolverState s;
  ComplexField u_t;
  beam.sample(cfg.grid, 0.0, &s.u_prev, &u_t);
  const ComplexField lap = discrete_laplacian(s.u_prev, cfg.c());
  s.u_curr = ComplexField(cfg.grid, s.u_prev.values + dt * u_t.values + (0.5 * dt * dt) * lap.values);
  s.step = 1;
  s.time = dt;
  return s;
}

Leapfrog::Leapfrog(const SimulationConfig& cfg) : c_(cfg.c()), dt_(cfg.time_step()), lap_(cfg.grid) {}

void Leapfrog::advance(SolverState& s) {
  discrete_laplacian_into(s.u_curr, c_, lap_);
  // u_prev becomes u^{n+1}
  s.u_prev.values = 2.0 * s.u_curr.values - s.u_prev.values + (dt_ * dt_) * lap_.values;
  std::swap(s.u_prev, s.u_curr);
  ++s.step;
  s.time = static_cast<double>(s.step) * dt_;
}

SolverState leapfrog_step(const SolverState& s, const SimulationConfig& cfg) {
  SolverState out = s;
  Leapfrog(cfg).advance(out);
  return out;
}

void reverse(SolverState& s) { std::swap(s.u_prev, s.u_curr); }

double scheme_energy(const SolverState& s, const SimulationConfig& cfg) {
  const double dt = cfg.time_step();
  const ComplexField lap = discrete_laplacian(s.u_prev, cfg.c());
  const double kinetic = (s.u_curr.values - s.u_prev.values).squaredNorm() / (dt * dt);
  const double potential = -(s.u_curr.values.dot(lap.values)).real();
  return 0.5 * cfg.grid.cell_volume() * (kinetic + potential);
}

namespace {

DiagnosticsRow diagnose(const SimulationConfig& cfg, std::int64_t n, const ComplexField& older,
                        const ComplexField& now, const ComplexField& newer) {
  const Grid& g = cfg.grid;
  const double dt = cfg.time_step();
  const double c = cfg.c();
  DiagnosticsRow row;
  row.step = n;
  row.t = static_cast<double>(n) * dt;
  row.ray = cfg.beam.center(row.t);

  const ComplexField ansatz = cfg.beam.sample(g, row.t);
  row.error_l2 = std::sqrt(g.cell_volume() * (ansatz.values - now.values).squaredNorm());

  const ComplexField v(g, (newer.values - older.values) / (2.0 * dt));
  std::array<ComplexField, kMaxDim> grad;
  for (int a = 0; a < g.dim(); ++a) grad[a] = forward_diff(now, a);
  const double radius = std::pow(g.h(), cfg.radius_exponent);
  double energy = 0.0, off = 0.0, mass = 0.0;
  Vec moment = Vec::Zero(g.dim());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const Vec x = g.point(j);
    double e = std::norm(v[j]);
    for (int a = 0; a < g.dim(); ++a) e += c * std::norm(grad[a][j]);
    energy += e;
    if ((x - row.ray).norm() > radius) off += e;
    const double w = std::norm(now[j]);
    mass += w;
    moment += w * x;
  }
  row.energy = 0.5 * g.cell_volume() * energy;
  row.offray_energy = 0.5 * g.cell_volume() * off;
  row.offray_ratio = energy > 0.0 ? off / energy : 0.0;
  row.centroid = mass > 0.0 ? Vec(moment / mass) : Vec(Vec::Constant(g.dim(), std::nan("")));
  return row;
}

// older, now, newer hold levels n0-1, n0, n0+1.
RunResult integrate(const SimulationConfig& cfg, SolverState window, ComplexField newer, std::int64_t n0) {
  const std::int64_t N = cfg.steps();
  const double dt = cfg.time_step();
  const double c = cfg.c();
  RunResult out;
  ComplexField lap(cfg.grid);
  ComplexField& older = window.u_prev;
  ComplexField& now = window.u_curr;
  for (std::int64_t n = n0;; ++n) {
    if ((n - n0) % cfg.cadence == 0 || n == N) out.rows.push_back(diagnose(cfg, n, older, now, newer));
    if (std::find(cfg.snapshot_steps.begin(), cfg.snapshot_steps.end(), n) != cfg.snapshot_steps.end())
      out.snapshots.emplace_back(n, now);
    if (n >= N) {
      window.step = n;
      window.time = static_cast<double>(n) * dt;
      break;
    }
    std::swap(older, now);
    std::swap(now, newer);
    // newer held u^{n-1}; overwrite with u^{n+2}
    discrete_laplacian_into(now, c, lap);
    newer.values = 2.0 * now.values - older.values + (dt * dt) * lap.values;
  }
  out.final_state = std::move(window);
  for (const auto& r : out.rows) out.sup_error = std::max(out.sup_error, r.error_l2);
  out.final_error = out.rows.back().error_l2;
  return out;
}

}  // namespace

RunResult run(const SimulationConfig& cfg) {
  SolverState s = init_from_beam(cfg.beam, cfg);
  const double dt = cfg.time_step();
  const ComplexField lap = discrete_laplacian(s.u_prev, cfg.c());
  // level -1 implied by the Taylor start; only used for the centred u_t at t = 0
  ComplexField before(cfg.grid, 2.0 * s.u_prev.values - s.u_curr.values + (dt * dt) * lap.values);
  ComplexField u1 = std::move(s.u_curr);
  SolverState window{std::move(before), std::move(s.u_prev), 0, 0.0};
  return integrate(cfg, std::move(window), std::move(u1), 0);
}

RunResult run_from(const SimulationConfig& cfg, SolverState state) {
  cfg.validate();
  if (!(state.u_prev.grid == cfg.grid) || !(state.u_curr.grid == cfg.grid))
    throw std::invalid_argument("solver state lives on a different grid");
  SolverState next = leapfrog_step(state, cfg);
  const std::int64_t n0 = state.step;
  return integrate(cfg, std::move(state), std::move(next.u_curr), n0);
}

}  // namespace gbwave
