#pragma once

#include <string>

#include "hdgmv/types.hpp"

namespace hdgmv {

// Row-wise arithmetic mean of a p x T panel (one column per time point).
inline Vector sample_mean_of(const Matrix& panel) {
  if (panel.rows() == 0 || panel.cols() == 0)
    throw DimensionError("sample_mean: empty panel");
  return panel.rowwise().mean();
}

inline MeanVector sample_mean(const ReturnsWindow& window) {
  return MeanVector(sample_mean_of(window.values));
}

// Sample covariance with Bessel's correction:
//   S = (1/(T-1)) sum_t (y_t - ybar)(y_t - ybar)'.
inline Matrix sample_covariance_of(const Matrix& panel) {
  const Index t = panel.cols();
  if (t < 2)
    throw InsufficientDataError("sample_covariance: need T >= 2, got T=" + std::to_string(t));
  const Vector mean = panel.rowwise().mean();
  const Matrix centered = panel.colwise() - mean;
  Matrix cov = Matrix::Zero(panel.rows(), panel.rows());
  cov.selfadjointView<Eigen::Lower>().rankUpdate(centered, 1.0 / static_cast<double>(t - 1));
  cov.triangularView<Eigen::Upper>() = cov.transpose();
  return cov;
}

inline CovarianceEstimate sample_covariance(const ReturnsWindow& window,
                                            CovarianceKind kind = CovarianceKind::in_sample) {
  return CovarianceEstimate(sample_covariance_of(window.values), window.length(), kind);
}

}  // namespace hdgmv
