// One line per acceptance criterion; exit status 1 if any fails.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <Eigen/LU>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "gbwave/beam_continuous.hpp"
#include "gbwave/beam_discrete.hpp"
#include "gbwave/config.hpp"
#include "gbwave/experiments.hpp"
#include "gbwave/solver.hpp"
#include "support.hpp"

using namespace gbwave;
using std::numbers::pi;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Verdict()>& check) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = check();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!v.pass) ++failures;
  std::printf("[%s] %d %s: %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", id, name, v.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

std::vector<Table1Row> table1_rows() {
  static const std::vector<Table1Row> rows = [] {
    const ExperimentSpec spec;
    std::vector<Table1Row> out;
    for (double h : spec.h) out.push_back(table1_row(spec, h));
    return out;
  }();
  return rows;
}

Verdict residual_rate() {
  std::vector<double> h, s;
  for (const auto& r : table1_rows()) {
    h.push_back(r.h);
    s.push_back(r.residual);
  }
  const double slope = loglog_slope(h, s);
  std::string detail = "slope " + fmt(slope) + " in [0.35, 0.65]; S_h =";
  for (double v : s) detail += " " + fmt(v);
  return {slope >= 0.35 && slope <= 0.65, detail};
}

Verdict energy_bound() {
  double lo = INFINITY, hi = 0.0;
  std::string values;
  for (const auto& r : table1_rows()) {
    lo = std::min(lo, r.energy);
    hi = std::max(hi, r.energy);
    values += " " + fmt(r.energy);
  }
  return {hi / lo <= 1.5, "max/min " + fmt(hi / lo) + " <= 1.5; E_h =" + values};
}

Verdict offray() {
  const auto rows = table1_rows();
  bool decreasing = true;
  std::string values;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    values += " " + fmt(rows[i].offray_ratio);
    if (i > 0 && !(rows[i].offray_ratio < rows[i - 1].offray_ratio)) decreasing = false;
  }
  const double last = rows.back().offray_ratio;
  return {decreasing && last < 1e-6,
          std::string(decreasing ? "strictly decreasing" : "not decreasing") + ", " + fmt(last) +
              " < 1e-6 at h = 0.002; ratios =" + values};
}

Verdict stationary() {
  const double h = 0.01;
  double worst_trapped = 0.0, worst_moving = 0.0;
  for (double xi0 : {pi, pi / 16}) {
    const DiscreteBeam beam(BeamParams::line(0.0, xi0), h);
    const RunResult r = run(SimulationConfig::around(beam, 0.1, 1.0));
    double worst = 0.0;
    for (const auto& row : r.rows) worst = std::max(worst, std::abs(row.centroid[0] - row.ray[0]));
    (xi0 == pi ? worst_trapped : worst_moving) = worst;
  }
  return {worst_trapped <= 2 * h && worst_moving <= 5 * h,
          "xi0 = pi drift " + fmt(worst_trapped) + " <= " + fmt(2 * h) + ", xi0 = pi/16 offset " +
              fmt(worst_moving) + " <= " + fmt(5 * h)};
}

Verdict error_decay() {
  bool ok = true;
  std::string detail;
  for (double xi0 : {pi / 16, pi / 4, pi / 2}) {
    ExperimentSpec spec;
    spec.xi0 = {xi0};
    double prev = INFINITY;
    bool mono = true;
    for (double h : spec.h) {
      const double e = error_row(spec, h).sup_error;
      mono = mono && e < prev;
      prev = e;
    }
    ok = ok && mono;
    detail += "xi0 " + fmt(xi0) + (mono ? " monotone" : " NOT monotone") + " (last " + fmt(prev) + "); ";
  }
  ExperimentSpec plane;
  plane.d = 2;
  plane.cadence = 5;
  const double coarse = error_row(plane, 0.02).sup_error;
  const double fine = error_row(plane, 0.01).sup_error;
  ok = ok && fine < coarse;
  detail += "2-D h 0.02 -> 0.01: " + fmt(coarse) + " -> " + fmt(fine);
  return {ok, detail};
}

Verdict continuous_rates() {
  const ExperimentSpec spec;
  std::vector<double> k, res;
  std::vector<RateRow> rows;
  for (double kk : spec.k) {
    rows.push_back(rate_row(spec, kk));
    k.push_back(kk);
    res.push_back(rows.back().residual);
  }
  double max_res = 0.0;
  for (double r : res) max_res = std::max(max_res, r);
  // log of an exactly vanishing residual has no slope
  const double slope = max_res > 0.0 ? loglog_slope(k, res) : NAN;
  const double off = rows.back().offray_fraction;
  const double change =
      std::abs(rows.back().energy - rows[rows.size() - 2].energy) / std::abs(rows.back().energy);

  ExperimentSpec plane;
  plane.d = 2;
  std::vector<double> res2;
  for (double kk : spec.k) res2.push_back(rate_row(plane, kk).residual);
  const double slope2 = loglog_slope(k, res2);

  const bool ok = slope >= -0.65 && slope <= -0.35 && off < 1e-6 && change <= 0.05;
  return {ok, "1-D residual slope " + fmt(slope) + " (max residual " + fmt(max_res) +
                  ") in [-0.65, -0.35]; 2-D slope " + fmt(slope2) + "; off-ray " + fmt(off) +
                  " < 1e-6; energy change " + fmt(change) + " <= 0.05"};
}

Verdict identities() {
  double worst_op = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const Grid g = trial % 2 ? Grid(0.01, vec2(0, 0), {30, 20}) : Grid(0.001, vec1(0), {200, 1});
    const double c = 1.3;
    const auto f = gbtest::random_field(g), q = gbtest::random_field(g);
    ComplexField cross(g), diff(g);
    for (int a = 0; a < g.dim(); ++a) {
      const auto fp = forward_diff(f, a), fm = backward_diff(f, a);
      const auto qp = forward_diff(q, a), qm = backward_diff(q, a);
      ComplexField sum(g, fp.values + fm.values), twice(g, 2.0 * centered_diff(f, a).values);
      worst_op = std::max(worst_op, gbtest::interior_rel_diff(sum, twice));
      diff.values += fp.values - fm.values;
      cross.values += c * (fp.values.cwiseProduct(qp.values) + fm.values.cwiseProduct(qm.values));
    }
    const auto lap = discrete_laplacian(f, c);
    worst_op = std::max(worst_op, gbtest::interior_rel_diff(diff, ComplexField(g, (g.h() / c) * lap.values)));
    const ComplexField prod(g, f.values.cwiseProduct(q.values));
    const ComplexField rhs(g, f.values.cwiseProduct(discrete_laplacian(q, c).values) +
                                  q.values.cwiseProduct(lap.values) + cross.values);
    worst_op = std::max(worst_op, gbtest::interior_rel_diff(discrete_laplacian(prod, c), rhs));
  }

  auto d_dt = [](const auto& f, double t) {
    const double s = 1e-3;
    return (-f(t + 2 * s) + 8.0 * f(t + s) - 8.0 * f(t - s) + f(t - 2 * s)) / (12.0 * s);
  };
  double worst_ode = 0.0, worst_redundant = 0.0, worst_im = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double xi = gbtest::uniform(0.05, 2 * pi - 0.05), c = gbtest::uniform(0.2, 3), q = gbtest::uniform(0.3, 3);
    const double t = gbtest::uniform(0, 5);
    const auto p = BeamParams::line(0.0, xi, c, {0.0, q});
    const double xdot = fd_velocity(p)[0], s = std::sin(xi / 2);
    const double lag = d_dt([&](double r) { return omega_1d(p, r); }, t) - xi * xdot;
    const complex M = riccati_M_1d(p, t);
    const complex Mdot = d_dt([&](double r) { return riccati_M_1d(p, r); }, t);
    worst_ode = std::max({worst_ode, std::abs(lag * lag - 4 * c * s * s), std::abs(lag * xdot + c * std::sin(xi)),
                          std::abs(lag * Mdot - (c * std::cos(xi) - xdot * xdot) * M * M) / (1 + std::norm(M))});
    const double lag2 = -c * std::sin(xi) / xdot;
    worst_redundant = std::max(worst_redundant, std::abs(lag2 * lag2 - 4 * c * s * s) / (1 + lag2 * lag2));
    const double tt = gbtest::uniform(0, 100);
    worst_im = std::max(worst_im, std::abs(riccati_M_1d(p, tt).imag() * (1 + q * q * c * s * s * tt * tt / 4) - q) / q);
  }

  const BeamParams diag = BeamParams::plane(vec2(0, 0), vec2(pi, 0.7), 1.5);
  const RMat b = riccati_coefficient(diag);
  const RiccatiTrajectory path(diag, 5.0);
  double worst_riccati = 0.0;
  for (int i = 0; i <= 50; ++i) {
    const double t = 0.1 * i;
    const CMat M = path.at(t).first;
    for (int a = 0; a < 2; ++a)
      worst_riccati = std::max(worst_riccati, std::abs(M(a, a) - complex(0, 1) / (1.0 - b(a, a) * complex(0, 1) * t)));
  }

  using boost::math::quadrature::gauss_kronrod;
  double worst_moment = 0.0;
  for (int N = 0; N <= 4; ++N) {
    const double rate = 3.0, L = std::sqrt(60.0 / rate);
    auto f1 = [&](double x) { return std::pow(x * x, N) * std::exp(-rate * x * x); };
    auto inner = [&](double y) {
      auto f2 = [&](double x) { return std::pow(x * x + y * y, N) * std::exp(-rate * (x * x + y * y)); };
      return gauss_kronrod<double, 61>::integrate(f2, -L, L, 15, 1e-14);
    };
    const double one = gauss_kronrod<double, 61>::integrate(f1, -L, L, 15, 1e-14);
    const double two = gauss_kronrod<double, 61>::integrate(inner, -L, L, 15, 1e-14);
    worst_moment = std::max({worst_moment, std::abs(one / gaussian_moment(N, 0.5, rate, 1) - 1),
                             std::abs(two / gaussian_moment(N, 0.5, rate, 2) - 1)});
  }

  const bool ok = worst_op <= 1e-13 && worst_ode <= 1e-10 && worst_redundant <= 1e-10 && worst_im <= 1e-12 &&
                  worst_riccati <= 1e-8 && worst_moment <= 1e-10;
  return {ok, "operators " + fmt(worst_op) + " <= 1e-13, phase ODE " + fmt(worst_ode) + " <= 1e-10, redundancy " +
                  fmt(worst_redundant) + " <= 1e-10, Im M " + fmt(worst_im) + " <= 1e-12, Riccati " +
                  fmt(worst_riccati) + " <= 1e-8, moments " + fmt(worst_moment) + " <= 1e-10"};
}

Verdict falsification() {
  const double xi = pi / 2, c = 1.0;
  const auto p = BeamParams::line(0.0, xi, c);
  const double xdot = fd_velocity(p)[0];
  const double naive = std::abs(eikonal_residual_fd(CVec::Constant(1, xi), -xi * xdot, c));
  const double closed = std::abs(4 * c * std::pow(std::sin(xi / 2), 2) - c * xi * xi * std::pow(std::cos(xi / 2), 2));
  const DiscreteBeam beam(p, 0.01);
  double corrected = 0.0;
  for (int i = 0; i <= 10; ++i) {
    const double t = 0.1 * i;
    corrected = std::max(corrected, std::abs(beam.eikonal_residual(beam.center(t), t)));
  }
  return {std::abs(naive - closed) <= 1e-14 && naive > 0.5 && corrected <= 1e-10,
          "naive |R_fd| " + fmt(naive) + " = closed form " + fmt(closed) + ", corrected " + fmt(corrected) +
              " <= 1e-10"};
}

}  // namespace

int main() {
  report(1, "residual rate", residual_rate);
  report(2, "energy bound", energy_bound);
  report(3, "off-ray concentration", offray);
  report(4, "stationary and moving centroid", stationary);
  report(5, "ansatz-vs-solver error decay", error_decay);
  report(6, "continuous beam rates", continuous_rates);
  report(7, "exact identities", identities);
  report(8, "naive phase falsification", falsification);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
