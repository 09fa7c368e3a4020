#pragma once

#include <Eigen/Dense>

namespace seqaudit {

// Row-major everywhere: a sequence is [timesteps x features] and batches are
// stacked along rows.
template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <class Scalar>
using ColVec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatX = Mat<double>;
using MatF = Mat<float>;
using VecX = ColVec<double>;
using VecF = ColVec<float>;

}  // namespace seqaudit
