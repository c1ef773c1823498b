#pragma once

#include <optional>
#include <string>

#include "hdgmv/linalg.hpp"
#include "hdgmv/portfolio.hpp"
#include "hdgmv/types.hpp"

namespace hdgmv {

// Performance of one strategy on one evaluation window. Variances are in
// per-period return^2 units, never annualized. The empirical loss can dip
// slightly below zero through the (1 - p/m) correction; it is recorded as-is.
struct PerformanceRecord {
  Strategy strategy;
  std::optional<double> oos_variance;
  std::optional<double> oos_relative_loss;
  std::optional<double> empirical_oos_variance;
  std::optional<double> empirical_oos_relative_loss;
};

// w' Sigma w under the known population covariance.
inline double oos_variance(const PortfolioWeights& w, const CovarianceEstimate& sigma) {
  return portfolio_variance(w, sigma);
}

// 1' Sigma^{-1} 1 * w' Sigma w - 1; zero exactly at the population GMV weights.
inline double oos_relative_loss(const PortfolioWeights& w, const CovarianceEstimate& sigma) {
  return target_relative_loss(w, sigma);
}

// w' S_out w on the disjoint evaluation window.
inline double empirical_oos_variance(const PortfolioWeights& w, const CovarianceEstimate& s_out) {
  return portfolio_variance(w, s_out);
}

// (1 - p/m) * 1' S_out^{-1} 1 * w' S_out w - 1, the plug-in c~ = p/m form.
inline double empirical_oos_relative_loss(const PortfolioWeights& w,
                                          const CovarianceEstimate& s_out, Index p, Index m) {
  if (m <= p)
    throw InsufficientDataError("empirical_oos_relative_loss: need m > p, got m=" +
                                std::to_string(m) + ", p=" + std::to_string(p));
  const SpdSolver solver(s_out.matrix, detail::cov_context(s_out));
  const double c_tilde = static_cast<double>(p) / static_cast<double>(m);
  return (1.0 - c_tilde) * ones_quadform_inverse(solver, s_out.dimension()) *
             portfolio_variance(w, s_out) -
         1.0;
}

// Consistent high-dimensional estimator of V_GMV from the evaluation window:
// 1 / ((1 - p/m) * 1' S_out^{-1} 1). This is the normalizer of the loss above.
inline double consistent_gmv_variance_estimate(const CovarianceEstimate& s_out, Index p, Index m) {
  if (m <= p)
    throw InsufficientDataError("consistent_gmv_variance_estimate: need m > p, got m=" +
                                std::to_string(m) + ", p=" + std::to_string(p));
  const SpdSolver solver(s_out.matrix, detail::cov_context(s_out));
  const double c_tilde = static_cast<double>(p) / static_cast<double>(m);
  return 1.0 / ((1.0 - c_tilde) * ones_quadform_inverse(solver, s_out.dimension()));
}

}  // namespace hdgmv
