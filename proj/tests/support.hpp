#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace islmusic::testing {

inline Eigen::MatrixXcd random_complex(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = {n(rng), n(rng)};
  }
  return m;
}

inline Eigen::MatrixXcd random_unitary(std::mt19937_64& rng, Eigen::Index size) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(random_complex(rng, size, size));
  return qr.householderQ() * Eigen::MatrixXcd::Identity(size, size);
}

// V diag(d) V^H with d uniform in [-scale, scale]; `spectrum` receives d.
inline Eigen::MatrixXcd random_hermitian(std::mt19937_64& rng, Eigen::Index size,
                                         Eigen::VectorXd* spectrum = nullptr, double scale = 10.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::VectorXd d(size);
  for (Eigen::Index i = 0; i < size; ++i) d(i) = u(rng);
  const Eigen::MatrixXcd v = random_unitary(rng, size);
  Eigen::MatrixXcd h = v * d.cast<std::complex<double>>().asDiagonal() * v.adjoint();
  h = (0.5 * (h + h.adjoint())).eval();
  if (spectrum) *spectrum = d;
  return h;
}

inline bool bitwise_equal(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (a(i, j).real() != b(i, j).real() || a(i, j).imag() != b(i, j).imag()) return false;
    }
  }
  return true;
}

}  // namespace islmusic::testing
