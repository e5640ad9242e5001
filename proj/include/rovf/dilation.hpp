#pragma once

#include <algorithm>
#include <stdexcept>

#include "rovf/linalg.hpp"
#include "rovf/types.hpp"

namespace rovf {

/// Dilation T = W^T P W of a positive contraction: W isometrically embeds
/// R^d into R^{2d} as x -> (x, 0) and P is a selfadjoint projection there.
template <typename Scalar>
struct Dilation {
  MatrixX<Scalar> isometry;    // 2d x d
  MatrixX<Scalar> projection;  // 2d x 2d
  Scalar max_eigenvalue_clamp = 0;  // how far the spectrum was pulled into [0,1]
};

/// Block construction: with S = sqrt(T(I-T)) taken in the eigenbasis of T,
///
///   P = [ T    S   ]      W = [ I ]
///       [ S    I-T ]          [ 0 ]
///
/// S commutes with T, which makes P idempotent. Eigenvalues are clamped to
/// [0,1] before the square root; the clamp magnitude is recorded.
template <typename Scalar>
Dilation<Scalar> halmos_dilate(const MatrixX<Scalar>& op, double tol = kContractionTol) {
  auto decomp = spectral(op);
  Index dim = op.rows();
  double lo = static_cast<double>(decomp.eigenvalues[0]);
  double hi = static_cast<double>(decomp.eigenvalues[dim - 1]);
  if (lo < -tol || hi > 1.0 + tol)
    throw std::invalid_argument("halmos_dilate: operator is not a positive contraction");

  VectorX<Scalar> clamped(dim);
  Scalar max_clamp = 0;
  for (Index i = 0; i < dim; ++i) {
    Scalar lambda = decomp.eigenvalues[i];
    Scalar c = std::clamp(lambda, Scalar(0), Scalar(1));
    max_clamp = std::max(max_clamp, std::abs(lambda - c));
    clamped[i] = c;
  }

  const MatrixX<Scalar>& q = decomp.eigenvectors;
  VectorX<Scalar> sqrt_vals = (clamped.array() * (Scalar(1) - clamped.array())).sqrt();
  MatrixX<Scalar> top = symmetric_part(q * clamped.asDiagonal() * q.transpose());
  MatrixX<Scalar> mixing = symmetric_part(q * sqrt_vals.asDiagonal() * q.transpose());

  Dilation<Scalar> result;
  result.isometry = MatrixX<Scalar>::Zero(2 * dim, dim);
  result.isometry.topRows(dim) = MatrixX<Scalar>::Identity(dim, dim);
  result.projection = MatrixX<Scalar>(2 * dim, 2 * dim);
  result.projection.topLeftCorner(dim, dim) = top;
  result.projection.topRightCorner(dim, dim) = mixing;
  result.projection.bottomLeftCorner(dim, dim) = mixing;
  result.projection.bottomRightCorner(dim, dim) = MatrixX<Scalar>::Identity(dim, dim) - top;
  result.max_eigenvalue_clamp = max_clamp;
  return result;
}

template <typename Scalar>
struct DilationReport {
  Scalar isometry_residual = 0;     // ||W^T W - I||_F
  Scalar idempotency_residual = 0;  // ||P^2 - P||_F
  Scalar compression_residual = 0;  // ||W^T P W - T||_F
  bool pass = false;
};

template <typename Scalar>
DilationReport<Scalar> verify_dilation(const MatrixX<Scalar>& op,
                                       const Dilation<Scalar>& dilation, double tol) {
  const auto& w = dilation.isometry;
  const auto& p = dilation.projection;
  if (w.cols() != op.rows() || p.rows() != w.rows())
    throw std::invalid_argument("verify_dilation: dimension mismatch");
  DilationReport<Scalar> report;
  Index dim = op.rows();
  report.isometry_residual =
      (w.transpose() * w - MatrixX<Scalar>::Identity(dim, dim)).norm();
  report.idempotency_residual = (p * p - p).norm();
  report.compression_residual = (w.transpose() * p * w - op).norm();
  report.pass = report.isometry_residual <= tol && report.idempotency_residual <= tol &&
                report.compression_residual <= tol;
  return report;
}

}  // namespace rovf
