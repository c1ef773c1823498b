#pragma once

#include <string>

#include "hdgmv/linalg.hpp"
#include "hdgmv/types.hpp"

namespace hdgmv {

namespace detail {

inline std::string cov_context(const CovarianceEstimate& cov) {
  return "covariance (p=" + std::to_string(cov.dimension()) +
         ", sample_size=" + std::to_string(cov.sample_size) + ")";
}

inline Strategy strategy_for_kind(CovarianceKind kind) {
  // Population input yields the true GMV weights; they share the
  // traditional tag since both are A^{-1}1 / (1'A^{-1}1).
  (void)kind;
  return Strategy::traditional;
}

}  // namespace detail

// GMV weights w = A^{-1} 1 / (1' A^{-1} 1).
inline PortfolioWeights gmv_weights(const CovarianceEstimate& cov) {
  const SpdSolver solver(cov.matrix, detail::cov_context(cov));
  const Vector x = solver.solve(Vector::Ones(cov.dimension()));
  return PortfolioWeights(x / x.sum(), detail::strategy_for_kind(cov.kind));
}

// GMV variance 1 / (1' A^{-1} 1).
inline double gmv_variance(const CovarianceEstimate& cov) {
  const SpdSolver solver(cov.matrix, detail::cov_context(cov));
  return 1.0 / ones_quadform_inverse(solver, cov.dimension());
}

// w' A w.
inline double portfolio_variance(const PortfolioWeights& w, const CovarianceEstimate& cov) {
  if (w.size() != cov.dimension())
    throw DimensionError("portfolio_variance: weights have " + std::to_string(w.size()) +
                         " entries, covariance is " + std::to_string(cov.dimension()) + "-dimensional");
  return w.weights.dot(cov.matrix * w.weights);
}

// Relative loss of a fixed portfolio b against the GMV optimum of A:
//   L_b = 1' A^{-1} 1 * b' A b - 1  (>= 0 by GMV minimality).
inline double target_relative_loss(const PortfolioWeights& b, const CovarianceEstimate& cov) {
  if (b.size() != cov.dimension())
    throw DimensionError("target_relative_loss: dimension mismatch");
  const SpdSolver solver(cov.matrix, detail::cov_context(cov));
  return ones_quadform_inverse(solver, cov.dimension()) * b.weights.dot(cov.matrix * b.weights) -
         1.0;
}

}  // namespace hdgmv
