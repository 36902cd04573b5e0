#include "islmusic/kernels.hpp"

#include <complex>

#include "islmusic/errors.hpp"

namespace islmusic::kernels {

namespace {

// samples_by_element: N x M, column i holds element i's samples contiguously.
inline std::complex<double> covariance_entry(const Eigen::MatrixXcd& samples_by_element,
                                             Eigen::Index i, Eigen::Index j) {
  const auto* xi = samples_by_element.col(i).data();
  const auto* xj = samples_by_element.col(j).data();
  double re = 0.0;
  double im = 0.0;
  for (Eigen::Index n = 0; n < samples_by_element.rows(); ++n) {
    const double a = xi[n].real(), b = xi[n].imag();
    const double c = xj[n].real(), d = xj[n].imag();
    // x_i * conj(x_j)
    re += a * c + b * d;
    im += b * c - a * d;
  }
  const double inv_n = 1.0 / static_cast<double>(samples_by_element.rows());
  return {re * inv_n, im * inv_n};
}

inline void fill_row(const Eigen::MatrixXcd& samples_by_element, Eigen::MatrixXcd& out,
                     Eigen::Index i) {
  for (Eigen::Index j = i; j < out.cols(); ++j) {
    const auto v = covariance_entry(samples_by_element, i, j);
    out(i, j) = v;
    out(j, i) = std::conj(v);
  }
  out(i, i) = out(i, i).real();
}

inline double projection_entry(const Eigen::MatrixXcd& steering,
                               const Eigen::MatrixXcd& noise_basis, Eigen::Index g) {
  const auto* s = steering.col(g).data();
  const Eigen::Index rows = noise_basis.rows();
  double total = 0.0;
  for (Eigen::Index k = 0; k < noise_basis.cols(); ++k) {
    const auto* u = noise_basis.col(k).data();
    double re = 0.0;
    double im = 0.0;
    for (Eigen::Index i = 0; i < rows; ++i) {
      // conj(s_i) * u_ik
      re += s[i].real() * u[i].real() + s[i].imag() * u[i].imag();
      im += s[i].real() * u[i].imag() - s[i].imag() * u[i].real();
    }
    total += re * re + im * im;
  }
  return total;
}

void check_covariance_input(const Eigen::MatrixXcd& snapshots) {
  if (snapshots.rows() == 0 || snapshots.cols() == 0) {
    throw ArgumentError("covariance of an empty snapshot matrix");
  }
}

void check_projection_input(const Eigen::MatrixXcd& steering, const Eigen::MatrixXcd& noise_basis,
                            std::span<double> out) {
  if (steering.rows() != noise_basis.rows()) {
    throw ArgumentError("steering vectors have " + std::to_string(steering.rows()) +
                        " entries but noise basis has " + std::to_string(noise_basis.rows()) +
                        " rows");
  }
  if (static_cast<Eigen::Index>(out.size()) != steering.cols()) {
    throw ArgumentError("output span does not match the number of steering vectors");
  }
}

}  // namespace

namespace serial {

void covariance(const Eigen::MatrixXcd& snapshots, Eigen::MatrixXcd& out) {
  check_covariance_input(snapshots);
  const Eigen::MatrixXcd by_element = snapshots.transpose();
  out.resize(snapshots.rows(), snapshots.rows());
  for (Eigen::Index i = 0; i < out.rows(); ++i) fill_row(by_element, out, i);
}

void noise_projection(const Eigen::MatrixXcd& steering, const Eigen::MatrixXcd& noise_basis,
                      std::span<double> out) {
  check_projection_input(steering, noise_basis, out);
  for (Eigen::Index g = 0; g < steering.cols(); ++g) {
    out[static_cast<std::size_t>(g)] = projection_entry(steering, noise_basis, g);
  }
}

}  // namespace serial

namespace omp {

void covariance(const Eigen::MatrixXcd& snapshots, Eigen::MatrixXcd& out, int threads) {
  check_covariance_input(snapshots);
  const Eigen::MatrixXcd by_element = snapshots.transpose();
  out.resize(snapshots.rows(), snapshots.rows());
  const Eigen::Index rows = out.rows();
  // Row i writes (i, j>=i) and its mirror; rows never overlap.
#pragma omp parallel for num_threads(threads) schedule(dynamic, 1)
  for (Eigen::Index i = 0; i < rows; ++i) fill_row(by_element, out, i);
}

void noise_projection(const Eigen::MatrixXcd& steering, const Eigen::MatrixXcd& noise_basis,
                      std::span<double> out, int threads) {
  check_projection_input(steering, noise_basis, out);
  const Eigen::Index points = steering.cols();
#pragma omp parallel for num_threads(threads) schedule(static)
  for (Eigen::Index g = 0; g < points; ++g) {
    out[static_cast<std::size_t>(g)] = projection_entry(steering, noise_basis, g);
  }
}

}  // namespace omp

void covariance(const Eigen::MatrixXcd& snapshots, Eigen::MatrixXcd& out, int threads) {
  if (threads <= 1) {
    serial::covariance(snapshots, out);
  } else {
    omp::covariance(snapshots, out, threads);
  }
}

void noise_projection(const Eigen::MatrixXcd& steering, const Eigen::MatrixXcd& noise_basis,
                      std::span<double> out, int threads) {
  if (threads <= 1) {
    serial::noise_projection(steering, noise_basis, out);
  } else {
    omp::noise_projection(steering, noise_basis, out, threads);
  }
}

}  // namespace islmusic::kernels
