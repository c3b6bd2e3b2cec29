#include "gbwave/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gbwave {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_factor(std::string_view f) {
  if (f == "pi") return std::numbers::pi;
  double v = 0.0;
  const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
  if (f.empty() || res.ec != std::errc{} || res.ptr != f.data() + f.size())
    throw std::invalid_argument("not a number: '" + std::string(f) + "'");
  return v;
}

[[noreturn]] void bad_value(std::string_view key, const std::string& why) {
  throw std::invalid_argument("config key '" + std::string(key) + "': " + why);
}

std::vector<double> parse_list(std::string_view key, std::string_view value) {
  std::vector<double> out;
  try {
    for (auto item : split(value, ',')) out.push_back(parse_real(item));
  } catch (const std::invalid_argument& e) {
    bad_value(key, e.what());
  }
  return out;
}

double parse_scalar(std::string_view key, std::string_view value) {
  const auto list = parse_list(key, value);
  if (list.size() != 1) bad_value(key, "expected a single number");
  return list.front();
}

long parse_integer(std::string_view key, std::string_view value) {
  long v = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (value.empty() || res.ec != std::errc{} || res.ptr != value.data() + value.size())
    bad_value(key, "expected an integer");
  return v;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(key, "expected true or false");
}

}  // namespace

std::string_view kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::table1: return "table1";
    case ExperimentKind::error_vs_h: return "error_vs_h";
    case ExperimentKind::snapshot: return "snapshot";
    case ExperimentKind::ray: return "ray";
    case ExperimentKind::dispersion: return "dispersion";
    case ExperimentKind::continuous_rates: return "continuous_rates";
  }
  return "unknown";
}

ExperimentKind parse_kind(std::string_view name) {
  for (auto k : {ExperimentKind::table1, ExperimentKind::error_vs_h, ExperimentKind::snapshot,
                 ExperimentKind::ray, ExperimentKind::dispersion, ExperimentKind::continuous_rates})
    if (kind_name(k) == name) return k;
  throw std::invalid_argument("unknown experiment kind '" + std::string(name) + "'");
}

double parse_real(std::string_view token) {
  std::string_view s = trim(token);
  double sgn = 1.0;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    if (s.front() == '-') sgn = -1.0;
    s.remove_prefix(1);
  }
  const auto slash = s.find('/');
  std::string_view num = s.substr(0, slash);
  double value = 1.0;
  const auto star = num.find('*');
  if (star == std::string_view::npos) {
    value = parse_factor(trim(num));
  } else {
    value = parse_factor(trim(num.substr(0, star))) * parse_factor(trim(num.substr(star + 1)));
  }
  if (slash != std::string_view::npos) value /= parse_factor(trim(s.substr(slash + 1)));
  return sgn * value;
}

Vec ExperimentSpec::resolved_xi0() const {
  Vec v(d);
  if (xi0.empty()) {
    v.setConstant(d == 1 ? std::numbers::pi / 16.0 : std::numbers::pi / 4.0);
    return v;
  }
  for (int a = 0; a < d; ++a) v[a] = xi0[static_cast<std::size_t>(a)];
  return v;
}

Vec ExperimentSpec::resolved_x0() const {
  Vec v(d);
  if (x0.empty()) {
    v.setConstant(d == 1 ? 0.0 : -0.25);
    return v;
  }
  for (int a = 0; a < d; ++a) v[a] = x0[static_cast<std::size_t>(a)];
  return v;
}

std::vector<double> ExperimentSpec::resolved_snapshot_times() const {
  if (!snapshot_times.empty()) return snapshot_times;
  return {0.0, 0.5 * T, T};
}

BeamParams ExperimentSpec::beam_params() const {
  return BeamParams{resolved_x0(), resolved_xi0(), c, scalar_matrix(complex(0.0, im_m0), d), branch};
}

void ExperimentSpec::validate() const {
  if (d != 1 && d != 2) bad_value("d", "dimension must be 1 or 2");
  if (h.empty()) bad_value("h", "list must not be empty");
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0 && h[i] < 1.0)) bad_value("h", "entries must lie in (0,1)");
    if (i > 0 && !(h[i] < h[i - 1])) bad_value("h", "list must be strictly decreasing");
  }
  if (!xi0.empty() && xi0.size() != static_cast<std::size_t>(d)) bad_value("xi0", "needs d entries");
  if (!x0.empty() && x0.size() != static_cast<std::size_t>(d)) bad_value("x0", "needs d entries");
  if (!(resolved_xi0().norm() > 0.0)) bad_value("xi0", "must be nonzero");
  if (!(c > 0.0)) bad_value("c", "wave speed must be positive");
  if (!(im_m0 > 0.0)) bad_value("im_m0", "imaginary part of M0 must be positive");
  if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("CFL ratio must lie in (0,1)");
  if (!(T >= 0.0) || !std::isfinite(T)) bad_value("T", "final time must be >= 0");
  if (k.empty()) bad_value("k", "list must not be empty");
  for (double v : k)
    if (!(v >= 1.0)) bad_value("k", "entries must be >= 1");
  for (double t : snapshot_times)
    if (!(t >= 0.0 && t <= T)) bad_value("snapshot_times", "entries must lie in [0, T]");
  if (cadence < 1) bad_value("cadence", "must be >= 1");
  if (samples < 2) bad_value("samples", "must be >= 2");
  if (n_max < 0) bad_value("n_max", "must be >= 0");
  if (threads < 1) bad_value("threads", "must be >= 1");
}

ExperimentSpec parse_config(std::string_view text) {
  ExperimentSpec spec;
  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (value.empty()) bad_value(key, "missing value");

    if (key == "kind") {
      spec.kind = parse_kind(value);
    } else if (key == "h") {
      spec.h = parse_list(key, value);
    } else if (key == "xi0") {
      spec.xi0 = parse_list(key, value);
    } else if (key == "x0") {
      spec.x0 = parse_list(key, value);
    } else if (key == "c") {
      spec.c = parse_scalar(key, value);
    } else if (key == "im_m0") {
      spec.im_m0 = parse_scalar(key, value);
    } else if (key == "branch") {
      if (value == "+" || value == "plus") spec.branch = Branch::plus;
      else if (value == "-" || value == "minus") spec.branch = Branch::minus;
      else bad_value(key, "expected + or -");
    } else if (key == "T") {
      spec.T = parse_scalar(key, value);
    } else if (key == "mu") {
      spec.mu = parse_scalar(key, value);
    } else if (key == "d") {
      spec.d = static_cast<int>(parse_integer(key, value));
    } else if (key == "k") {
      spec.k = parse_list(key, value);
    } else if (key == "snapshot_times") {
      spec.snapshot_times = parse_list(key, value);
    } else if (key == "cadence") {
      spec.cadence = static_cast<int>(parse_integer(key, value));
    } else if (key == "samples") {
      spec.samples = static_cast<int>(parse_integer(key, value));
    } else if (key == "n_max") {
      spec.n_max = static_cast<int>(parse_integer(key, value));
    } else if (key == "seed") {
      spec.seed = static_cast<std::uint64_t>(parse_integer(key, value));
    } else if (key == "threads") {
      spec.threads = static_cast<int>(parse_integer(key, value));
    } else if (key == "bit_exact") {
      spec.bit_exact = parse_bool(key, value);
    } else if (key == "output") {
      spec.output = std::string(value);
    } else {
      throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
    }
  }
  spec.validate();
  return spec;
}

}  // namespace gbwave
