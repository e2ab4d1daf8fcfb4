#pragma once

#include <Eigen/Dense>

#include "concentrix/matcore.hpp"

namespace concentrix::detail {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline Eigen::Map<const RowMat> view(const DenseMatrix& m) {
  return Eigen::Map<const RowMat>(m.data(), static_cast<Eigen::Index>(m.rows()),
                                  static_cast<Eigen::Index>(m.cols()));
}

inline Eigen::Map<RowMat> view(DenseMatrix& m) {
  return Eigen::Map<RowMat>(m.data(), static_cast<Eigen::Index>(m.rows()),
                            static_cast<Eigen::Index>(m.cols()));
}

template <typename Expr>
DenseMatrix to_dense(const Eigen::MatrixBase<Expr>& e) {
  DenseMatrix out(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
  view(out) = e;
  return out;
}

}  // namespace concentrix::detail
