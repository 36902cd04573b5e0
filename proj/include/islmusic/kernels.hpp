#pragma once

#include <span>

#include <Eigen/Dense>

// Data-parallel inner loops of the MUSIC pipeline. Each kernel has a serial
// reference and an OpenMP version; both evaluate every output entry with the
// same arithmetic in the same order, so their results are bitwise identical.
namespace islmusic::kernels {

namespace serial {

// R = (1/N) sum_n x_n x_n^H, upper triangle computed, lower mirrored.
void covariance(const Eigen::MatrixXcd& snapshots, Eigen::MatrixXcd& out);

// out[g] = || noise_basis^H steering.col(g) ||^2
void noise_projection(const Eigen::MatrixXcd& steering, const Eigen::MatrixXcd& noise_basis,
                      std::span<double> out);

}  // namespace serial

namespace omp {

void covariance(const Eigen::MatrixXcd& snapshots, Eigen::MatrixXcd& out, int threads);

void noise_projection(const Eigen::MatrixXcd& steering, const Eigen::MatrixXcd& noise_basis,
                      std::span<double> out, int threads);

}  // namespace omp

// Dispatch: threads <= 1 runs the serial reference.
void covariance(const Eigen::MatrixXcd& snapshots, Eigen::MatrixXcd& out, int threads = 1);
void noise_projection(const Eigen::MatrixXcd& steering, const Eigen::MatrixXcd& noise_basis,
                      std::span<double> out, int threads = 1);

}  // namespace islmusic::kernels
