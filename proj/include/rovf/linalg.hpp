#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "rovf/types.hpp"

namespace rovf {

inline constexpr double kSymmetryRelTol = 1e-12;
inline constexpr double kContractionTol = 1e-9;
inline constexpr double kProjectionTol = 1e-10;
inline constexpr double kRankPivotTol = 1e-10;

template <typename Derived>
bool has_finite_entries(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

/// Relative symmetry test: |A - A^T| bounded by rtol * max(1, max|entry|).
template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& m, double rtol = kSymmetryRelTol) {
  if (m.rows() != m.cols()) return false;
  double scale = std::max(1.0, m.template lpNorm<Eigen::Infinity>());
  return (m - m.transpose()).template lpNorm<Eigen::Infinity>() <= rtol * scale;
}

template <typename Derived>
MatrixX<typename Derived::Scalar> symmetric_part(const Eigen::MatrixBase<Derived>& m) {
  return (m + m.transpose()) / 2;
}

/// Matrix-vector product with an explicit dimension check.
template <typename Scalar>
VectorX<Scalar> apply(const MatrixX<Scalar>& op, const VectorX<Scalar>& x) {
  if (op.rows() != op.cols() || op.cols() != x.size())
    throw std::invalid_argument("apply: dimension mismatch");
  return op * x;
}

template <typename Scalar>
struct SpectralDecomp {
  VectorX<Scalar> eigenvalues;   // ascending
  MatrixX<Scalar> eigenvectors;  // orthonormal columns
};

/// Eigendecomposition of a symmetric operator. Rejects non-symmetric input
/// and reports solver failure instead of returning garbage.
template <typename Scalar>
SpectralDecomp<Scalar> spectral(const MatrixX<Scalar>& op) {
  if (!has_finite_entries(op)) throw std::invalid_argument("spectral: non-finite entries");
  if (!is_symmetric(op)) throw std::invalid_argument("spectral: operator is not symmetric");
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(op);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("spectral: eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

struct ContractionCertificate {
  bool positive_contraction = false;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// Checks 0 <= T <= I up to tol, returning the extreme eigenvalues as the
/// certificate either way.
template <typename Scalar>
ContractionCertificate is_positive_contraction(const MatrixX<Scalar>& op,
                                               double tol = kContractionTol) {
  auto decomp = spectral(op);
  double lo = static_cast<double>(decomp.eigenvalues[0]);
  double hi = static_cast<double>(decomp.eigenvalues[decomp.eigenvalues.size() - 1]);
  return {lo >= -tol && hi <= 1.0 + tol, lo, hi};
}

/// Energy gap ||x||^2 - ||Tx||^2 - ||x - Tx||^2 of a positive contraction.
/// Nonnegative for every 0 <= T <= I, and zero exactly when T is a
/// projection (orthogonal Pythagoras split).
template <typename Scalar>
Scalar energy_gap(const MatrixX<Scalar>& op, const VectorX<Scalar>& x) {
  if (op.cols() != x.size()) throw std::invalid_argument("energy_gap: dimension mismatch");
  auto cert = is_positive_contraction(op);
  if (!cert.positive_contraction)
    throw std::invalid_argument("energy_gap: operator is not a positive contraction");
  VectorX<Scalar> tx = op * x;
  return x.squaredNorm() - tx.squaredNorm() - (x - tx).squaredNorm();
}

/// Orthogonal projection onto the span of the given basis vectors.
/// A pivot below kRankPivotTol (relative to the largest) flags dependence.
template <typename Scalar>
MatrixX<Scalar> make_projection(const std::vector<VectorX<Scalar>>& basis) {
  if (basis.empty()) throw std::invalid_argument("make_projection: empty basis");
  Index dim = basis[0].size();
  MatrixX<Scalar> spanning(dim, static_cast<Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].size() != dim)
      throw std::invalid_argument("make_projection: basis vectors differ in dimension");
    spanning.col(static_cast<Index>(i)) = basis[i];
  }
  if (!has_finite_entries(spanning))
    throw std::invalid_argument("make_projection: non-finite entries");

  Eigen::ColPivHouseholderQR<MatrixX<Scalar>> qr(spanning);
  qr.setThreshold(kRankPivotTol);
  if (qr.rank() < spanning.cols())
    throw std::invalid_argument("make_projection: basis is rank deficient");

  MatrixX<Scalar> q = qr.householderQ() * MatrixX<Scalar>::Identity(dim, spanning.cols());
  return symmetric_part(q * q.transpose());
}

}  // namespace rovf
