#include "gbwave/grid.hpp"

#include <cmath>

namespace gbwave {

Grid::Grid(double h, const Vec& lo, const std::array<std::size_t, kMaxDim>& counts)
    : h_(h), dim_(static_cast<int>(lo.size())) {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("grid step must be positive");
  if (dim_ < 1 || dim_ > kMaxDim) throw std::invalid_argument("grid dimension must be 1 or 2");
  for (int a = 0; a < dim_; ++a) {
    if (counts[a] == 0) throw std::invalid_argument("grid needs at least one node per axis");
    lo_[a] = lo[a];
    counts_[a] = counts[a];
  }
}

Grid Grid::covering(double h, const Vec& lo, const Vec& hi) {
  if (lo.size() != hi.size()) throw std::invalid_argument("box bounds differ in dimension");
  if (!(h > 0.0)) throw std::invalid_argument("grid step must be positive");
  Vec start(lo.size());
  std::array<std::size_t, kMaxDim> counts{1, 1};
  for (int a = 0; a < lo.size(); ++a) {
    if (!(hi[a] >= lo[a])) throw std::invalid_argument("box upper bound below lower bound");
    const double first = std::floor(lo[a] / h);
    const double last = std::ceil(hi[a] / h);
    start[a] = first * h;
    counts[a] = static_cast<std::size_t>(last - first) + 1;
  }
  return Grid(h, start, counts);
}

std::size_t Grid::size() const { return dim_ == 1 ? counts_[0] : counts_[0] * counts_[1]; }

double Grid::cell_volume() const { return dim_ == 1 ? h_ : h_ * h_; }

std::array<std::size_t, kMaxDim> Grid::unravel(std::size_t flat) const {
  if (dim_ == 1) return {flat, 0};
  return {flat % counts_[0], flat / counts_[0]};
}

Vec Grid::point(std::size_t flat) const {
  const auto idx = unravel(flat);
  Vec x(dim_);
  for (int a = 0; a < dim_; ++a) x[a] = coord(a, idx[a]);
  return x;
}

bool Grid::is_interior(std::size_t flat) const {
  const auto idx = unravel(flat);
  for (int a = 0; a < dim_; ++a)
    if (idx[a] == 0 || idx[a] + 1 >= counts_[a]) return false;
  return true;
}

Grid Grid::shifted(const std::array<long, kMaxDim>& cells) const {
  Grid g = *this;
  for (int a = 0; a < dim_; ++a) g.lo_[a] = lo_[a] + static_cast<double>(cells[a]) * h_;
  return g;
}

}  // namespace gbwave
