// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The semcom Authors

#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace semcom {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Complex matrix equal to its conjugate transpose.
///
/// Construction checks ||A - A^H||_F <= tol * ||A||_F, then stores the exact
/// Hermitian part (A + A^H) / 2 so the diagonal is real.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& m, double tol = 1e-12);

  static HermitianMatrix zero(Eigen::Index dim);
  static HermitianMatrix identity(Eigen::Index dim);
  /// u u^H
  static HermitianMatrix outer(const ComplexVector& u);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

 private:
  ComplexMatrix m_;
};

/// Principal branch W0 of the Lambert W function for z >= 0.
/// Halley iteration; |w e^w - z| <= 1e-12 max(1, z).
double lambert_w0(double z);

struct HermitianEig {
  Eigen::VectorXd values;  // descending
  ComplexMatrix vectors;   // columns, unitary
};

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
/// Throws ContractViolation if `a` is not Hermitian within 1e-12 relative.
HermitianEig hermitian_eig(const ComplexMatrix& a);
HermitianEig hermitian_eig(const HermitianMatrix& a);

/// Deterministic, splittable random stream.
///
/// The state is xoshiro256** seeded through splitmix64 from (seed, stream_id),
/// and Gaussian draws use the Marsaglia polar method on top of the integer
/// stream, so sequences do not depend on the standard library's distributions.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Independent child stream; depends only on (seed, stream_id, key), not on
  /// how much of this stream has been consumed.
  RngStream fork(std::uint64_t key) const;
  RngStream fork(std::uint64_t key, std::uint64_t index) const;

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal.
  double normal();
  /// Circularly-symmetric complex normal with unit variance, CN(0, 1).
  cplx cnormal();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t s_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Lower-triangular factor with diagonal pivoting: P^T A P = L L^H, where
/// `factor` holds P L restricted to its first `rank` columns, so that
/// A = factor * factor^H. Pivots below tol * max(diag) end the factorization.
struct PivotedCholesky {
  ComplexMatrix factor;
  Eigen::Index rank = 0;
};

/// Throws DomainError when A is indefinite beyond the pivot tolerance.
PivotedCholesky pivoted_cholesky(const ComplexMatrix& a, double tol = 1e-12);

/// Draw from CN(mean, cov). cov must be Hermitian PSD.
ComplexVector sample_cgauss(RngStream& stream, const ComplexVector& mean,
                            const HermitianMatrix& cov);

/// Frobenius inner product Re tr(A^H B).
double inner(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace semcom
