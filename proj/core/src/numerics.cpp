// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The semcom Authors

#include "semcom/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "semcom/errors.hpp"

namespace semcom {

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "invalid configuration (" << violations.size() << " violation"
           << (violations.size() == 1 ? "" : "s") << ")";
        for (const auto& v : violations) os << "\n  - " << v;
        return os.str();
      }()),
      violations_(std::move(violations)) {}

namespace {

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  if (!m.allFinite()) return false;
  const double norm = m.norm();
  const double asym = (m - m.adjoint()).norm();
  return asym <= tol * norm;
}

}  // namespace

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) {
    throw ContractViolation("HermitianMatrix: matrix is not square");
  }
  if (!is_hermitian(m, tol)) {
    throw ContractViolation("HermitianMatrix: matrix is not Hermitian");
  }
  m_ = 0.5 * (m + m.adjoint());
  for (Eigen::Index i = 0; i < m_.rows(); ++i) m_(i, i) = m_(i, i).real();
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index dim) {
  return HermitianMatrix(ComplexMatrix::Zero(dim, dim));
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index dim) {
  return HermitianMatrix(ComplexMatrix::Identity(dim, dim));
}

HermitianMatrix HermitianMatrix::outer(const ComplexVector& u) {
  return HermitianMatrix(u * u.adjoint());
}

double lambert_w0(double z) {
  if (std::isnan(z) || z < 0.0) {
    throw DomainError("lambert_w0: argument must be non-negative");
  }
  if (z == 0.0) return 0.0;
  if (std::isinf(z)) return z;

  double w = std::log1p(z);
  for (int it = 0; it < 100; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - z;
    const double wp1 = w + 1.0;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(w))) {
      break;
    }
  }
  return w;
}

HermitianEig hermitian_eig(const ComplexMatrix& a) {
  if (a.rows() != a.cols() || !is_hermitian(a, 1e-12)) {
    throw ContractViolation("hermitian_eig: input is not Hermitian");
  }
  const ComplexMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eig: eigensolver did not converge");
  }
  const Eigen::Index n = h.rows();
  HermitianEig out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  // Eigen sorts ascending.
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = es.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return out;
}

HermitianEig hermitian_eig(const HermitianMatrix& a) { return hermitian_eig(a.matrix()); }

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

std::uint64_t combine(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ splitmix64(b + 0x632BE59BD9B4E019ULL));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  std::uint64_t x = combine(splitmix64(seed), stream_id);
  for (auto& word : s_) {
    x += kGolden;
    word = splitmix64(x);
  }
}

RngStream RngStream::fork(std::uint64_t key) const {
  return RngStream(seed_, combine(stream_id_, key));
}

RngStream RngStream::fork(std::uint64_t key, std::uint64_t index) const {
  return fork(key).fork(index);
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

cplx RngStream::cnormal() {
  const double re = normal();
  const double im = normal();
  return {re * M_SQRT1_2, im * M_SQRT1_2};
}

PivotedCholesky pivoted_cholesky(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols()) throw ContractViolation("pivoted_cholesky: matrix is not square");
  const Eigen::Index n = a.rows();
  ComplexMatrix s = 0.5 * (a + a.adjoint());
  ComplexMatrix l = ComplexMatrix::Zero(n, n);
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});

  double scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) scale = std::max(scale, std::abs(s(i, i).real()));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (s(i, i).real() < -tol * std::max(scale, 1e-300)) {
      throw DomainError("pivoted_cholesky: matrix has a negative diagonal entry");
    }
  }

  PivotedCholesky out;
  Eigen::Index k = 0;
  for (; k < n; ++k) {
    Eigen::Index piv = k;
    for (Eigen::Index j = k + 1; j < n; ++j) {
      if (s(j, j).real() > s(piv, piv).real()) piv = j;
    }
    const double d = s(piv, piv).real();
    if (d <= tol * scale) break;
    if (piv != k) {
      s.row(k).swap(s.row(piv));
      s.col(k).swap(s.col(piv));
      l.row(k).swap(l.row(piv));
      std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(piv)]);
    }
    const double lkk = std::sqrt(d);
    l(k, k) = lkk;
    for (Eigen::Index i = k + 1; i < n; ++i) l(i, k) = s(i, k) / lkk;
    for (Eigen::Index j = k + 1; j < n; ++j) {
      for (Eigen::Index i = k + 1; i < n; ++i) {
        s(i, j) -= l(i, k) * std::conj(l(j, k));
      }
    }
  }
  // Remaining Schur complement of a PSD matrix is bounded entrywise by its
  // diagonal; anything larger means the input was indefinite.
  for (Eigen::Index j = k; j < n; ++j) {
    for (Eigen::Index i = k; i < n; ++i) {
      if (std::abs(s(i, j)) > 1e-8 * std::max(scale, 1e-300)) {
        throw DomainError("pivoted_cholesky: matrix is not positive semidefinite");
      }
    }
  }
  out.rank = k;
  out.factor = ComplexMatrix::Zero(n, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.factor.row(perm[static_cast<std::size_t>(i)]) = l.row(i).head(k);
  }
  return out;
}

ComplexVector sample_cgauss(RngStream& stream, const ComplexVector& mean,
                            const HermitianMatrix& cov) {
  if (cov.dim() != mean.size()) {
    throw ContractViolation("sample_cgauss: mean and covariance dimensions differ");
  }
  const PivotedCholesky chol = pivoted_cholesky(cov.matrix());
  ComplexVector z(chol.rank);
  for (Eigen::Index i = 0; i < chol.rank; ++i) z(i) = stream.cnormal();
  if (chol.rank == 0) return mean;
  return mean + chol.factor * z;
}

double inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

}  // namespace semcom
