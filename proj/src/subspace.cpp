#include "islmusic/subspace.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "islmusic/errors.hpp"
#include "islmusic/kernels.hpp"

namespace islmusic {

double hermitian_defect(const Eigen::MatrixXcd& matrix) {
  const double norm = matrix.norm();
  if (norm == 0.0) return 0.0;
  return (matrix - matrix.adjoint()).norm() / norm;
}

CovarianceMatrix::CovarianceMatrix(Eigen::MatrixXcd values) : values_(std::move(values)) {
  if (values_.rows() != values_.cols() || values_.rows() == 0) {
    throw ArgumentError("covariance must be a non-empty square matrix");
  }
  if (!values_.allFinite()) throw ArgumentError("covariance has non-finite entries");
  if (hermitian_defect(values_) > kHermitianTolerance) {
    throw ArgumentError("covariance is not Hermitian within tolerance");
  }
}

CovarianceMatrix sample_covariance(const Eigen::MatrixXcd& snapshots, int threads) {
  Eigen::MatrixXcd r;
  // The kernel mirrors the upper triangle, so the result is exactly Hermitian.
  kernels::covariance(snapshots, r, threads);
  return CovarianceMatrix(std::move(r));
}

CovarianceMatrix sample_covariance(const SnapshotMatrix& snapshots, int threads) {
  return sample_covariance(snapshots.data, threads);
}

EigenDecomposition eig_hermitian(const CovarianceMatrix& covariance) {
  const Eigen::MatrixXcd& r = covariance.values();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(r, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("Hermitian eigensolver did not converge for " +
                         std::to_string(r.rows()) + "x" + std::to_string(r.cols()) + " matrix");
  }
  EigenDecomposition out{solver.eigenvalues(), solver.eigenvectors()};

  for (Eigen::Index c = 0; c < out.eigenvectors.cols(); ++c) {
    auto col = out.eigenvectors.col(c);
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      const double mag = std::abs(col(i));
      if (mag > 1e-10) {
        col *= std::conj(col(i)) / mag;
        col(i) = mag;
        break;
      }
    }
  }
  return out;
}

EigenDecomposition eig_hermitian(const Eigen::MatrixXcd& matrix) {
  return eig_hermitian(CovarianceMatrix(matrix));
}

SubspaceSplit split_subspaces(const EigenDecomposition& eig, std::size_t source_count) {
  const auto dim = static_cast<std::size_t>(eig.eigenvectors.cols());
  if (source_count < 1 || source_count >= dim) {
    throw ConfigError("source count m=" + std::to_string(source_count) +
                      " must satisfy 1 <= m < M=" + std::to_string(dim));
  }
  const auto m = static_cast<Eigen::Index>(source_count);
  const auto noise_dim = static_cast<Eigen::Index>(dim) - m;
  SubspaceSplit split;
  split.source_count = source_count;
  split.noise_basis = eig.eigenvectors.leftCols(noise_dim);
  split.signal_basis = eig.eigenvectors.rightCols(m);
  return split;
}

}  // namespace islmusic
