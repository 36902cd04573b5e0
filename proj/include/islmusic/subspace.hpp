#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "islmusic/signal_synth.hpp"

namespace islmusic {

// Relative tolerance on ||R - R^H||_F / ||R||_F accepted as Hermitian.
inline constexpr double kHermitianTolerance = 1e-12;

// M x M sample covariance. Construction checks the Hermitian invariant.
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(Eigen::MatrixXcd values);

  const Eigen::MatrixXcd& values() const { return values_; }
  Eigen::Index dimension() const { return values_.rows(); }

 private:
  Eigen::MatrixXcd values_;
};

// ||R - R^H||_F / ||R||_F, zero for the zero matrix.
double hermitian_defect(const Eigen::MatrixXcd& matrix);

// (1/N) sum_n x_n x_n^H over the snapshot columns.
CovarianceMatrix sample_covariance(const Eigen::MatrixXcd& snapshots, int threads = 1);
CovarianceMatrix sample_covariance(const SnapshotMatrix& snapshots, int threads = 1);

struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;    // ascending
  Eigen::MatrixXcd eigenvectors;  // column i pairs with eigenvalues(i)
};

// Hermitian eigendecomposition. Each eigenvector column is rotated so that its
// first non-negligible component is real and positive. Throws ArgumentError
// for non-square or non-Hermitian input and NumericalError on non-convergence.
EigenDecomposition eig_hermitian(const CovarianceMatrix& covariance);
EigenDecomposition eig_hermitian(const Eigen::MatrixXcd& matrix);

struct SubspaceSplit {
  std::size_t source_count = 0;
  Eigen::MatrixXcd noise_basis;   // M x (M - m), smallest eigenvalues
  Eigen::MatrixXcd signal_basis;  // M x m, largest eigenvalues

  Eigen::Index dimension() const { return noise_basis.rows(); }
};

SubspaceSplit split_subspaces(const EigenDecomposition& eig, std::size_t source_count);

}  // namespace islmusic
