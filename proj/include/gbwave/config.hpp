#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gbwave/rays.hpp"

namespace gbwave {

enum class ExperimentKind { table1, error_vs_h, snapshot, ray, dispersion, continuous_rates };

std::string_view kind_name(ExperimentKind k);
ExperimentKind parse_kind(std::string_view name);

/// Resolved experiment settings.
struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::table1;
  std::vector<double> h{0.1, 0.05, 0.01, 0.005, 0.002};
  std::vector<double> xi0;  // empty: dimension-dependent default
  std::vector<double> x0;   // empty: dimension-dependent default
  double c = 1.0;
  double im_m0 = 1.0;
  Branch branch = Branch::plus;
  double T = 1.0;
  double mu = 0.1;
  int d = 1;
  std::vector<double> k{64, 128, 256, 512, 1024};
  std::vector<double> snapshot_times;  // empty: 0, T/2, T
  int cadence = 1;
  int samples = 801;
  int n_max = 8;
  std::uint64_t seed = 0;
  int threads = 1;
  bool bit_exact = false;
  std::string output = ".";

  Vec resolved_xi0() const;
  Vec resolved_x0() const;
  std::vector<double> resolved_snapshot_times() const;
  BeamParams beam_params() const;

  /// Throws std::invalid_argument naming the key and the constraint.
  void validate() const;
};

/// Flat `key = value` document; `#` starts a comment, lists are comma
/// separated. Numbers accept the forms 0.25, 1e-3, pi, -pi/16, 3*pi/4.
ExperimentSpec parse_config(std::string_view text);

/// Number token as accepted by parse_config.
double parse_real(std::string_view token);

}  // namespace gbwave
