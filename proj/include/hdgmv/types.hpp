#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include <string>
#include <utility>

#include "hdgmv/errors.hpp"

namespace hdgmv {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class Strategy { traditional, fm_shrinkage, bps_shrinkage, target };

inline const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::traditional:
      return "traditional";
    case Strategy::fm_shrinkage:
      return "fm";
    case Strategy::bps_shrinkage:
      return "bps";
    case Strategy::target:
      return "target";
  }
  return "?";
}

enum class CovarianceKind { in_sample, out_of_sample, population };

// p-vector of expected returns (or a sample mean of returns).
struct MeanVector {
  Vector values;

  explicit MeanVector(Vector v) : values(std::move(v)) {
    if (values.size() == 0 || !values.allFinite())
      throw DimensionError("MeanVector: entries must be finite and non-empty");
  }
};

// A p x T panel of asset returns, one column per time point.
struct ReturnsWindow {
  Matrix values;

  explicit ReturnsWindow(Matrix panel) : values(std::move(panel)) {
    if (values.rows() < 2 || values.cols() < 2)
      throw DimensionError("ReturnsWindow: need at least 2 assets and 2 observations, got p=" +
                           std::to_string(values.rows()) + ", T=" + std::to_string(values.cols()));
    if (!values.allFinite())
      throw DimensionError("ReturnsWindow: panel contains non-finite entries");
  }

  Index asset_count() const { return values.rows(); }
  Index length() const { return values.cols(); }
};

// Symmetric p x p covariance matrix with sample-size provenance.
struct CovarianceEstimate {
  Matrix matrix;
  Index sample_size;  // the T the estimate was built from (p for population)
  CovarianceKind kind;

  CovarianceEstimate(Matrix m, Index n, CovarianceKind k)
      : matrix(std::move(m)), sample_size(n), kind(k) {
    if (matrix.rows() != matrix.cols())
      throw DimensionError("CovarianceEstimate: matrix must be square");
    if (sample_size < 1) throw DimensionError("CovarianceEstimate: sample_size must be positive");
    const double scale = matrix.cwiseAbs().maxCoeff();
    const double asym = (matrix - matrix.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(1.0, scale))
      throw DimensionError("CovarianceEstimate: matrix is not symmetric");
  }

  Index dimension() const { return matrix.rows(); }
};

// Fully-invested portfolio weights: entries sum to one.
struct PortfolioWeights {
  Vector weights;
  Strategy strategy;

  PortfolioWeights(Vector w, Strategy s) : weights(std::move(w)), strategy(s) {
    if (weights.size() == 0 || !weights.allFinite())
      throw DimensionError("PortfolioWeights: entries must be finite and non-empty");
    const double total = weights.sum();
    if (std::abs(total - 1.0) > 1e-10)
      throw DimensionError("PortfolioWeights: weights sum to " + std::to_string(total) +
                           ", expected 1");
  }

  Index size() const { return weights.size(); }
};

}  // namespace hdgmv
