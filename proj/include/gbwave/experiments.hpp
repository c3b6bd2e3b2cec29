#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "gbwave/config.hpp"

namespace gbwave {

struct Table1Row {
  double h = 0.0;
  double energy = 0.0;        // max over time nodes
  double residual = 0.0;      // S_h, max over time nodes
  double offray_ratio = 0.0;  // max over time nodes
};

struct ErrorRow {
  double h = 0.0;
  double sup_error = 0.0;
  double final_error = 0.0;
};

struct RateRow {
  double k = 0.0;
  double residual = 0.0;
  double energy = 0.0;
  double offray_fraction = 0.0;
};

/// Ansatz residual, energy and off-ray ratio at one mesh size.
Table1Row table1_row(const ExperimentSpec& spec, double h);
ErrorRow error_row(const ExperimentSpec& spec, double h);
RateRow rate_row(const ExperimentSpec& spec, double k);

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

struct ExperimentReport {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> errors;  // one entry per failed run
  bool ok() const { return errors.empty(); }
};

/// Runs the experiment and writes CSV files plus a JSON sidecar into dir.
ExperimentReport run_experiment(const ExperimentSpec& spec, const std::filesystem::path& dir);

}  // namespace gbwave
