#pragma once

#include <Eigen/Core>

#include "daqff/nn/tensor.hpp"

namespace daqff::nn::detail {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<RowMatrix>;
using ConstMatrixMap = Eigen::Map<const RowMatrix>;
using StridedMap = Eigen::Map<RowMatrix, 0, Eigen::OuterStride<>>;
using ConstStridedMap = Eigen::Map<const RowMatrix, 0, Eigen::OuterStride<>>;
using VectorMap = Eigen::Map<Eigen::RowVectorXd>;
using ConstVectorMap = Eigen::Map<const Eigen::RowVectorXd>;

inline MatrixMap as_matrix(Tensor& t, Eigen::Index rows, Eigen::Index cols) { return {t.data(), rows, cols}; }
inline ConstMatrixMap as_matrix(const Tensor& t, Eigen::Index rows, Eigen::Index cols) { return {t.data(), rows, cols}; }
inline VectorMap as_row(Tensor& t) { return {t.data(), static_cast<Eigen::Index>(t.size())}; }
inline ConstVectorMap as_row(const Tensor& t) { return {t.data(), static_cast<Eigen::Index>(t.size())}; }

} // namespace daqff::nn::detail
