#pragma once

#include <complex>

#include <Eigen/Core>

namespace gbwave {

using complex = std::complex<double>;

inline constexpr int kMaxDim = 2;

// Vectors and matrices of size d <= kMaxDim; no heap allocation.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using CVec = Eigen::Matrix<complex, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using RMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;
using CMat = Eigen::Matrix<complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

inline Vec vec1(double a) {
  Vec v(1);
  v << a;
  return v;
}

inline Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

inline CMat scalar_matrix(complex m, int d) { return CMat::Identity(d, d) * m; }

}  // namespace gbwave
