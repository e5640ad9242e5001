#pragma once

#include <Eigen/Dense>

namespace rovf {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrixd = MatrixX<double>;
using Vectord = VectorX<double>;
using Index = Eigen::Index;

}  // namespace rovf
