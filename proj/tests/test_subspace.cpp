#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"

#include "islmusic/errors.hpp"
#include "islmusic/subspace.hpp"

using namespace islmusic;
using islmusic::testing::random_complex;
using islmusic::testing::random_hermitian;

TEST_CASE("sample covariance examples") {
  const Eigen::MatrixXcd ones = Eigen::MatrixXcd::Ones(3, 1);
  CHECK(sample_covariance(ones).values() == Eigen::MatrixXcd::Ones(3, 3));
  CHECK(sample_covariance(Eigen::MatrixXcd::Zero(4, 9)).values() == Eigen::MatrixXcd::Zero(4, 4));
  const Eigen::MatrixXcd two = Eigen::MatrixXcd::Identity(2, 2);
  CHECK(sample_covariance(two).values() == 0.5 * Eigen::MatrixXcd::Identity(2, 2));
  CHECK_THROWS_AS(sample_covariance(Eigen::MatrixXcd(0, 0)), ArgumentError);
}

TEST_CASE("sample covariance is exactly Hermitian and matches (1/N) X X^H") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::MatrixXcd x = random_complex(rng, 2 + trial % 13, 1 + trial * 3);
    const Eigen::MatrixXcd r = sample_covariance(x).values();
    CHECK(r == r.adjoint());
    const Eigen::MatrixXcd expected = x * x.adjoint() / static_cast<double>(x.cols());
    CHECK((r - expected).norm() <= 1e-12 * expected.norm());
  }
}

TEST_CASE("covariance validation") {
  Eigen::MatrixXcd m(2, 2);
  m << 1.0, std::complex<double>(0, 1), std::complex<double>(0, 1), 1.0;
  CHECK(hermitian_defect(m) > 0.5);
  CHECK_THROWS_AS(CovarianceMatrix{m}, ArgumentError);
  CHECK_THROWS_AS(CovarianceMatrix{Eigen::MatrixXcd(2, 3)}, ArgumentError);
  Eigen::MatrixXcd nan = Eigen::MatrixXcd::Identity(2, 2);
  nan(0, 0) = NAN;
  CHECK_THROWS_AS(CovarianceMatrix{nan}, ArgumentError);
  CHECK_THROWS_AS(eig_hermitian(m), ArgumentError);
}

TEST_CASE("eigendecomposition examples") {
  const EigenDecomposition id = eig_hermitian(Eigen::MatrixXcd::Identity(4, 4));
  CHECK(id.eigenvalues == Eigen::VectorXd::Ones(4));

  Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(3, 3);
  diag(0, 0) = 3.0;
  diag(1, 1) = 1.0;
  diag(2, 2) = 2.0;
  const EigenDecomposition d = eig_hermitian(diag);
  CHECK(d.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(d.eigenvalues(1) == doctest::Approx(2.0));
  CHECK(d.eigenvalues(2) == doctest::Approx(3.0));
  CHECK(std::abs(d.eigenvectors(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(d.eigenvectors(2, 1)) == doctest::Approx(1.0));
  CHECK(std::abs(d.eigenvectors(0, 2)) == doctest::Approx(1.0));

  Eigen::MatrixXcd two(2, 2);
  two << 2.0, 1.0, 1.0, 2.0;
  const EigenDecomposition e = eig_hermitian(two);
  CHECK(e.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(e.eigenvalues(1) == doctest::Approx(3.0));
  const double h = 1.0 / std::sqrt(2.0);
  // Canonical phase: first significant component real and positive.
  CHECK(e.eigenvectors(0, 0).real() == doctest::Approx(h));
  CHECK(e.eigenvectors(1, 0).real() == doctest::Approx(-h));
  CHECK(e.eigenvectors(0, 1).real() == doctest::Approx(h));
  CHECK(e.eigenvectors(1, 1).real() == doctest::Approx(h));
}

TEST_CASE("eigensolver round trip on random Hermitian matrices") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> size(1, 40);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd spectrum;
    const Eigen::MatrixXcd r = random_hermitian(rng, size(rng), &spectrum);
    const EigenDecomposition eig = eig_hermitian(r);
    const Eigen::MatrixXcd& v = eig.eigenvectors;
    const Eigen::Index n = r.rows();

    const double residual = (r * v - v * eig.eigenvalues.cast<std::complex<double>>().asDiagonal()).norm();
    CHECK(residual <= 1e-9 * r.norm());
    CHECK((v.adjoint() * v - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
    for (Eigen::Index i = 1; i < n; ++i) CHECK(eig.eigenvalues(i - 1) <= eig.eigenvalues(i));

    std::sort(spectrum.data(), spectrum.data() + n);
    CHECK((eig.eigenvalues - spectrum).cwiseAbs().maxCoeff() <= 1e-9 * r.norm());
    CHECK(eig.eigenvalues.sum() == doctest::Approx(r.trace().real()).epsilon(1e-9).scale(r.norm()));
  }
}

TEST_CASE("subspace split") {
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Identity(3, 3);
  r(0, 0) = 5.0;
  const SubspaceSplit s = split_subspaces(eig_hermitian(r), 1);
  REQUIRE(s.noise_basis.cols() == 2);
  REQUIRE(s.signal_basis.cols() == 1);
  CHECK(std::abs(s.noise_basis(0, 0)) < 1e-12);
  CHECK(std::abs(s.noise_basis(0, 1)) < 1e-12);
  CHECK(std::abs(s.signal_basis(0, 0)) == doctest::Approx(1.0));
  CHECK(s.dimension() == 3);

  const EigenDecomposition eig = eig_hermitian(r);
  CHECK_THROWS_AS(split_subspaces(eig, 3), ConfigError);
  CHECK_THROWS_AS(split_subspaces(eig, 0), ConfigError);

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::MatrixXcd h = random_hermitian(rng, 12);
    const SubspaceSplit split = split_subspaces(eig_hermitian(h), 1 + trial % 11);
    const Eigen::Index k = split.noise_basis.cols();
    CHECK((split.noise_basis.adjoint() * split.noise_basis - Eigen::MatrixXcd::Identity(k, k))
              .cwiseAbs()
              .maxCoeff() <= 1e-10);
    CHECK((split.noise_basis.adjoint() * split.signal_basis).cwiseAbs().maxCoeff() <= 1e-10);
  }
}
