#include "gbwave/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "gbwave/beam_continuous.hpp"
#include "gbwave/beam_discrete.hpp"
#include "gbwave/csv.hpp"
#include "gbwave/solver.hpp"

namespace gbwave {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// fn(i) for i < n on up to `threads` workers; failures land in errors[i].
template <class T>
std::vector<std::optional<T>> parallel_map(std::size_t n, int threads, const std::function<T(std::size_t)>& fn,
                                           std::vector<std::string>& errors) {
  std::vector<std::optional<T>> out(n);
  std::vector<std::string> err(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        out[i] = fn(i);
      } catch (const std::exception& e) {
        err[i] = e.what();
      }
    }
  };
  const auto count = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (count <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < count; ++w) pool.emplace_back(worker);
  }
  for (auto& e : err)
    if (!e.empty()) errors.push_back(std::move(e));
  return out;
}

std::ofstream open_output(const fs::path& path, ExperimentReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  report.files.push_back(path);
  return out;
}

json config_json(const ExperimentSpec& s) {
  auto vec = [](const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  json j;
  j["kind"] = kind_name(s.kind);
  j["d"] = s.d;
  j["h"] = s.h;
  j["xi0"] = vec(s.resolved_xi0());
  j["x0"] = vec(s.resolved_x0());
  j["c"] = s.c;
  j["im_m0"] = s.im_m0;
  j["branch"] = s.branch == Branch::plus ? "+" : "-";
  j["T"] = s.T;
  j["mu"] = s.mu;
  j["k"] = s.k;
  j["snapshot_times"] = s.resolved_snapshot_times();
  j["cadence"] = s.cadence;
  j["samples"] = s.samples;
  j["n_max"] = s.n_max;
  j["seed"] = s.seed;
  j["threads"] = s.threads;
  j["bit_exact"] = s.bit_exact;
  return j;
}

void write_json(const fs::path& path, const json& j, ExperimentReport& report) {
  auto out = open_output(path, report);
  out << j.dump(2) << '\n';
}

std::string h_tag(double h) { return "h" + format_number(h); }

int effective_threads(const ExperimentSpec& s) { return s.bit_exact ? 1 : s.threads; }

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

SimulationConfig simulation(const ExperimentSpec& spec, const DiscreteBeam& beam) {
  SimulationConfig cfg = SimulationConfig::around(beam, spec.mu, spec.T);
  cfg.cadence = spec.cadence;
  return cfg;
}

std::vector<std::string> point_columns(std::string_view name, int d) {
  if (d == 1) return {std::string(name)};
  return {std::string(name) + "0", std::string(name) + "1"};
}

void write_diagnostics(std::ostream& out, const RunResult& r, int d) {
  std::vector<std::string> cols{"step", "t", "error_l2", "energy", "offray_energy", "offray_ratio"};
  for (const auto& c : point_columns("centroid", d)) cols.push_back(c);
  for (const auto& c : point_columns("ray", d)) cols.push_back(c);
  CsvWriter csv(out, cols);
  for (const auto& row : r.rows) {
    csv << static_cast<long long>(row.step) << row.t << row.error_l2 << row.energy << row.offray_energy
        << row.offray_ratio;
    for (int a = 0; a < d; ++a) csv << row.centroid[a];
    for (int a = 0; a < d; ++a) csv << row.ray[a];
    csv.end_row();
  }
}

void write_snapshot_rows(CsvWriter& csv, double t, const ComplexField& f) {
  for (std::size_t j = 0; j < f.size(); ++j) {
    csv << t;
    const Vec x = f.grid.point(j);
    for (int a = 0; a < f.grid.dim(); ++a) csv << x[a];
    csv << f[j].real() << f[j].imag() << std::abs(f[j]);
    csv.end_row();
  }
}

RunResult simulate(const ExperimentSpec& spec, double h, const std::vector<std::int64_t>& snapshot_steps = {}) {
  const DiscreteBeam beam(spec.beam_params(), h, spec.T);
  SimulationConfig cfg = simulation(spec, beam);
  cfg.snapshot_steps = snapshot_steps;
  return run(cfg);
}

void table1_experiment(const ExperimentSpec& spec, const fs::path& dir, ExperimentReport& report) {
  const auto rows = parallel_map<Table1Row>(
      spec.h.size(), effective_threads(spec), [&](std::size_t i) { return table1_row(spec, spec.h[i]); },
      report.errors);
  std::vector<double> hs, energy, residual, offray;
  {
    auto out = open_output(dir / "table1.csv", report);
    CsvWriter csv(out, {"h", "E_h", "S_h", "sqrt_h", "offray_ratio"});
    for (const auto& r : rows) {
      if (!r) continue;
      csv << r->h << r->energy << r->residual << std::sqrt(r->h) << r->offray_ratio;
      csv.end_row();
      hs.push_back(r->h);
      energy.push_back(r->energy);
      residual.push_back(r->residual);
      offray.push_back(r->offray_ratio);
    }
  }
  json j;
  j["config"] = config_json(spec);
  j["energy_time_sampling"] = "max over leapfrog time nodes";
  if (hs.size() >= 2) {
    j["residual_slope"] = loglog_slope(hs, residual);
    j["residual_endpoint_slope"] =
        std::log(residual.back() / residual.front()) / std::log(hs.back() / hs.front());
    j["energy_ratio"] = *std::max_element(energy.begin(), energy.end()) /
                        *std::min_element(energy.begin(), energy.end());
    j["offray_strictly_decreasing"] = strictly_decreasing(offray);
  }
  j["errors"] = report.errors;
  write_json(dir / "table1.json", j, report);
}

void error_experiment(const ExperimentSpec& spec, const fs::path& dir, ExperimentReport& report) {
  const auto runs = parallel_map<RunResult>(
      spec.h.size(), effective_threads(spec), [&](std::size_t i) { return simulate(spec, spec.h[i]); },
      report.errors);
  std::vector<double> sup;
  {
    auto out = open_output(dir / "error_vs_h.csv", report);
    CsvWriter csv(out, {"h", "sup_error", "final_error"});
    for (std::size_t i = 0; i < runs.size(); ++i) {
      if (!runs[i]) continue;
      csv << spec.h[i] << runs[i]->sup_error << runs[i]->final_error;
      csv.end_row();
      sup.push_back(runs[i]->sup_error);
    }
  }
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (!runs[i]) continue;
    auto out = open_output(dir / ("diagnostics_" + h_tag(spec.h[i]) + ".csv"), report);
    write_diagnostics(out, *runs[i], spec.d);
  }
  json j;
  j["config"] = config_json(spec);
  j["sup_error_strictly_decreasing"] = strictly_decreasing(sup);
  j["errors"] = report.errors;
  write_json(dir / "error_vs_h.json", j, report);
}

void snapshot_experiment(const ExperimentSpec& spec, const fs::path& dir, ExperimentReport& report) {
  const double h = spec.h.front();
  const DiscreteBeam beam(spec.beam_params(), h, spec.T);
  SimulationConfig cfg = simulation(spec, beam);
  const auto N = cfg.steps();
  for (double t : spec.resolved_snapshot_times())
    cfg.snapshot_steps.push_back(std::clamp<std::int64_t>(std::llround(t / cfg.time_step()), 0, N));
  const RunResult r = run(cfg);
  {
    auto out = open_output(dir / "diagnostics.csv", report);
    write_diagnostics(out, r, spec.d);
  }
  std::vector<std::string> cols{"t"};
  for (const auto& c : point_columns("x", spec.d)) cols.push_back(c);
  cols.insert(cols.end(), {"re", "im", "abs"});
  auto sol = open_output(dir / "snapshot_solution.csv", report);
  auto ans = open_output(dir / "snapshot_ansatz.csv", report);
  CsvWriter sol_csv(sol, cols), ans_csv(ans, cols);
  for (const auto& [step, field] : r.snapshots) {
    const double t = static_cast<double>(step) * cfg.time_step();
    write_snapshot_rows(sol_csv, t, field);
    write_snapshot_rows(ans_csv, t, beam.sample(cfg.grid, t));
  }
  json j;
  j["config"] = config_json(spec);
  j["grid"] = {{"h", h}, {"n", cfg.grid.size()}};
  j["sup_error"] = r.sup_error;
  j["final_error"] = r.final_error;
  double drift = 0.0;
  for (const auto& row : r.rows) drift = std::max(drift, (row.centroid - row.ray).norm());
  j["max_centroid_offset"] = drift;
  j["errors"] = report.errors;
  write_json(dir / "snapshot.json", j, report);
}

void ray_experiment(const ExperimentSpec& spec, const fs::path& dir, ExperimentReport& report) {
  const BeamParams p = spec.beam_params();
  const auto n = static_cast<std::size_t>(spec.samples);
  std::vector<std::string> cols{"t"};
  for (const auto& c : point_columns("x", spec.d)) cols.push_back(c);
  auto emit = [&](const fs::path& path, RayKind kind) {
    auto out = open_output(path, report);
    CsvWriter csv(out, cols);
    for (const auto& [t, x] : sample_ray(p, kind, spec.T, n).samples) {
      csv << t;
      for (int a = 0; a < spec.d; ++a) csv << x[a];
      csv.end_row();
    }
  };
  emit(dir / "ray.csv", RayKind::finite_difference);
  emit(dir / "ray_continuous.csv", RayKind::continuous);
  json j;
  j["config"] = config_json(spec);
  j["group_velocity"] = group_velocity_fd(p.xi0, p.c);
  j["errors"] = report.errors;
  write_json(dir / "ray.json", j, report);
}

void dispersion_experiment(const ExperimentSpec& spec, const fs::path& dir, ExperimentReport& report) {
  const double pi = std::numbers::pi;
  const int n = spec.samples - 1;
  std::vector<double> zeros;
  {
    auto out = open_output(dir / "group_velocity.csv", report);
    CsvWriter csv(out, {"xi", "v"});
    for (int i = 0; i <= n; ++i) {
      // multiples of pi/(n/8) are hit exactly when 8 divides n
      const double xi = pi * (8.0 * i - 4.0 * n) / n;
      const double v = group_velocity_fd(vec1(xi), spec.c);
      csv << xi << v;
      csv.end_row();
      if (v < 1e-12) zeros.push_back(xi);
    }
  }
  {
    auto out = open_output(dir / "partial_symbols.csv", report);
    CsvWriter csv(out, {"xi", "N", "value"});
    for (int N = 0; N <= spec.n_max + 1; ++N) {
      const bool limit = N > spec.n_max;
      for (int i = 0; i <= n; ++i) {
        const double xi = pi * i / n;
        csv << xi;
        if (limit) csv << std::string_view("inf");
        else csv << static_cast<long long>(N);
        csv << (limit ? fd_symbol_1d(xi, 0.0, spec.c, 1.0) : partial_symbol(xi, 0.0, spec.c, 1.0, N));
        csv.end_row();
      }
    }
  }
  json j;
  j["config"] = config_json(spec);
  j["group_velocity_zeros"] = zeros;
  std::vector<double> factors;
  for (int N = 0; N <= spec.n_max; ++N) factors.push_back(velocity_factor(N));
  j["velocity_factor"] = factors;
  j["velocity_factor_limit"] = velocity_factor_limit();
  j["errors"] = report.errors;
  write_json(dir / "dispersion.json", j, report);
}

void continuous_experiment(const ExperimentSpec& spec, const fs::path& dir, ExperimentReport& report) {
  const auto rows = parallel_map<RateRow>(
      spec.k.size(), effective_threads(spec), [&](std::size_t i) { return rate_row(spec, spec.k[i]); },
      report.errors);
  std::vector<double> ks, res, energy;
  {
    auto out = open_output(dir / "continuous_rates.csv", report);
    CsvWriter csv(out, {"k", "residual_norm", "energy", "offray_fraction"});
    for (const auto& r : rows) {
      if (!r) continue;
      csv << r->k << r->residual << r->energy << r->offray_fraction;
      csv.end_row();
      ks.push_back(r->k);
      res.push_back(r->residual);
      energy.push_back(r->energy);
    }
  }
  json j;
  j["config"] = config_json(spec);
  if (ks.size() >= 2) {
    const double top = *std::max_element(res.begin(), res.end());
    j["residual_max"] = top;
    // an identically vanishing residual has no log-log slope
    if (top > 0.0) j["residual_slope"] = loglog_slope(ks, res);
    else j["residual_slope"] = nullptr;
    const double a = energy[energy.size() - 2], b = energy.back();
    j["energy_relative_change_top"] = std::abs(b - a) / std::abs(b);
  }
  j["errors"] = report.errors;
  write_json(dir / "continuous_rates.json", j, report);
}

}  // namespace

Table1Row table1_row(const ExperimentSpec& spec, double h) {
  const DiscreteBeam beam(spec.beam_params(), h, spec.T);
  const Grid box = truncation_box(beam, spec.T);
  const double dt = spec.mu * h;
  const auto N = static_cast<long>(std::ceil(spec.T / dt - 1e-9));
  Table1Row row{h, 0.0, 0.0, 0.0};
  for (long n = 0; n <= N; ++n) {
    const AnsatzSnapshot s = ansatz_snapshot(beam, box, static_cast<double>(n) * dt);
    row.energy = std::max(row.energy, s.energy);
    row.residual = std::max(row.residual, s.residual);
    row.offray_ratio = std::max(row.offray_ratio, s.offray_energy / s.energy);
  }
  return row;
}

ErrorRow error_row(const ExperimentSpec& spec, double h) {
  const RunResult r = simulate(spec, h);
  return {h, r.sup_error, r.final_error};
}

RateRow rate_row(const ExperimentSpec& spec, double k) {
  const ContinuousBeam beam(spec.beam_params(), k);
  std::vector<double> times;
  for (int i = 0; i <= 4; ++i) times.push_back(spec.T * i / 4.0);
  return {k, continuous_residual_sup(beam, times), continuous_energy_estimate(beam, spec.T),
          continuous_offray_fraction(beam, spec.T)};
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope fit needs two or more points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

ExperimentReport run_experiment(const ExperimentSpec& spec, const fs::path& dir) {
  spec.validate();
  ExperimentReport report;
  fs::create_directories(dir);
  try {
    switch (spec.kind) {
      case ExperimentKind::table1: table1_experiment(spec, dir, report); break;
      case ExperimentKind::error_vs_h: error_experiment(spec, dir, report); break;
      case ExperimentKind::snapshot: snapshot_experiment(spec, dir, report); break;
      case ExperimentKind::ray: ray_experiment(spec, dir, report); break;
      case ExperimentKind::dispersion: dispersion_experiment(spec, dir, report); break;
      case ExperimentKind::continuous_rates: continuous_experiment(spec, dir, report); break;
    }
  } catch (const std::exception& e) {
    report.errors.push_back(e.what());
  }
  return report;
}

}  // namespace gbwave
