#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gbwave/beam_discrete.hpp"
#include "gbwave/lattice.hpp"

namespace gbwave {

/// Leapfrog run of u_tt = Delta_{c,h} u started from a lattice beam.
struct SimulationConfig {
  Grid grid;
  DiscreteBeam beam;
  double mu = 0.1;      // time step h_t = mu h
  double T = 1.0;
  int cadence = 1;      // diagnostics every cadence steps (and at the end)
  double radius_exponent = 0.25;
  std::vector<std::int64_t> snapshot_steps;  // solution copies kept at these steps

  static SimulationConfig around(const DiscreteBeam& beam, double mu = 0.1, double T = 1.0);

  double c() const { return beam.params().c; }
  double time_step() const { return mu * grid.h(); }
  std::int64_t steps() const;

  /// Rejects mu outside (0,1), an unstable mu for the dimension, or a
  /// grid that does not match the beam.
  void validate() const;
};

struct SolverState {
  ComplexField u_prev;
  ComplexField u_curr;
  std::int64_t step = 0;
  double time = 0.0;
};

struct DiagnosticsRow {
  std::int64_t step = 0;
  double t = 0.0;
  double error_l2 = 0.0;      // distance to the ansatz
  double energy = 0.0;        // semidiscrete energy, centred u_t
  double offray_energy = 0.0;
  double offray_ratio = 0.0;
  Vec centroid;
  Vec ray;                    // x_fd(t)
};

/// u^0 sampled from the beam; u^1 from the second-order Taylor start.
SolverState init_from_beam(const DiscreteBeam& beam, const SimulationConfig& cfg);

/// u^{n+1} = 2u^n - u^{n-1} + h_t^2 Delta_{c,h} u^n.
SolverState leapfrog_step(const SolverState& s, const SimulationConfig& cfg);

/// In-place version of leapfrog_step reusing scratch storage.
class Leapfrog {
 public:
  explicit Leapfrog(const SimulationConfig& cfg);
  void advance(SolverState& s);

 private:
  double c_;
  double dt_;
  ComplexField lap_;
};

/// Swap the two time levels; stepping afterwards runs time backwards.
void reverse(SolverState& s);

/// Conserved quantity of the leapfrog scheme between levels n-1 and n:
/// 1/2 |(u^n - u^{n-1})/h_t|^2 + 1/2 Re <u^n, -Delta u^{n-1}>.
double scheme_energy(const SolverState& s, const SimulationConfig& cfg);

struct RunResult {
  std::vector<DiagnosticsRow> rows;
  SolverState final_state;
  double sup_error = 0.0;
  double final_error = 0.0;
  std::vector<std::pair<std::int64_t, ComplexField>> snapshots;
};

RunResult run(const SimulationConfig& cfg);

/// As run, but starting from a prepared state.
RunResult run_from(const SimulationConfig& cfg, SolverState state);

}  // namespace gbwave
