#pragma once

#include <map>
#include <string>

#include "hdgmv/linalg.hpp"
#include "hdgmv/moments.hpp"
#include "hdgmv/portfolio.hpp"
#include "hdgmv/types.hpp"

namespace hdgmv {

enum class IntensityKind { fm, bps };

// Shrinkage weight put on the sample GMV portfolio. The FM value is stored
// unclamped: the analyzed formula can leave [0,1] in finite samples and the
// raw value is what enters the weight combination.
struct ShrinkageIntensity {
  double value;
  IntensityKind kind;

  bool within_unit_interval() const { return value >= 0.0 && value <= 1.0; }
};

// The two quadratic forms both intensity formulas consume, computed once per
// in-sample window: 1' S^{-1} 1 and b' S b.
struct WindowQuadforms {
  double one_sinv_one;
  double b_s_b;

  double product() const { return one_sinv_one * b_s_b; }
};

inline WindowQuadforms window_quadforms(const SpdSolver& solver, const CovarianceEstimate& s,
                                        const PortfolioWeights& b) {
  if (b.size() != s.dimension())
    throw DimensionError("window_quadforms: target dimension mismatch");
  return WindowQuadforms{ones_quadform_inverse(solver, s.dimension()),
                         b.weights.dot(s.matrix * b.weights)};
}

// 1/p in every entry.
inline PortfolioWeights equally_weighted_target(Index p) {
  if (p < 1) throw DomainError("equally_weighted_target: p must be positive");
  Vector w = Vector::Constant(p, 1.0 / static_cast<double>(p));
  w /= w.sum();  // renormalize so the sum is exactly one
  return PortfolioWeights(std::move(w), Strategy::target);
}

// By Cauchy-Schwarz 1'S^{-1}1 * b'Sb >= (1'b)^2 = 1, so the excess below is
// nonnegative up to floating error; values this close to zero mean b
// coincides with the sample GMV portfolio and the formulas degenerate.
inline constexpr double kDegenerateTargetTol = 1e-12;

inline double target_excess_or_throw(const WindowQuadforms& q, const char* who) {
  const double excess = q.product() - 1.0;
  if (excess < kDegenerateTargetTol)
    throw DegenerateTargetError(std::string(who) +
                                ": target numerically coincides with the sample GMV portfolio "
                                "(1'S^-1 1 * b'Sb - 1 = " +
                                std::to_string(excess) + ")");
  return excess;
}

// alpha_FM = 1 - (p-3)/(n-p+2) * (1'S^{-1}1 * b'Sb - 1)^{-1}.
inline ShrinkageIntensity fm_intensity_from(const WindowQuadforms& q, Index p, Index n) {
  if (p < 4) throw DomainError("fm_intensity: requires p >= 4, got p=" + std::to_string(p));
  if (n - p + 2 <= 0)
    throw DomainError("fm_intensity: requires n - p + 2 > 0, got n=" + std::to_string(n) +
                      ", p=" + std::to_string(p));
  const double excess = target_excess_or_throw(q, "fm_intensity");
  const double factor = static_cast<double>(p - 3) / static_cast<double>(n - p + 2);
  return ShrinkageIntensity{1.0 - factor / excess, IntensityKind::fm};
}

inline ShrinkageIntensity fm_intensity(const CovarianceEstimate& s, const PortfolioWeights& b,
                                       Index p, Index n) {
  const SpdSolver solver(s.matrix, detail::cov_context(s));
  return fm_intensity_from(window_quadforms(solver, s, b), p, n);
}

// alpha_BPS = (1-r) q / (r + (1-r) q) with r = p/n and
// q = (1-r) * 1'S^{-1}1 * b'Sb - 1.
inline ShrinkageIntensity bps_intensity_from(const WindowQuadforms& q, Index p, Index n) {
  if (p < 1 || n <= p)
    throw DomainError("bps_intensity: requires n > p >= 1, got n=" + std::to_string(n) +
                      ", p=" + std::to_string(p));
  const double r = static_cast<double>(p) / static_cast<double>(n);
  const double excess = (1.0 - r) * q.product() - 1.0;
  const double denom = r + (1.0 - r) * excess;
  if (std::abs(denom) < 1e-300)
    throw DegenerateTargetError("bps_intensity: denominator r + (1-r)q vanished");
  return ShrinkageIntensity{(1.0 - r) * excess / denom, IntensityKind::bps};
}

inline ShrinkageIntensity bps_intensity(const CovarianceEstimate& s, const PortfolioWeights& b,
                                        Index p, Index n) {
  const SpdSolver solver(s.matrix, detail::cov_context(s));
  return bps_intensity_from(window_quadforms(solver, s, b), p, n);
}

// alpha * w_sample + (1 - alpha) * b.
inline PortfolioWeights shrinkage_weights(const ShrinkageIntensity& alpha,
                                          const PortfolioWeights& w_sample,
                                          const PortfolioWeights& b) {
  if (w_sample.size() != b.size())
    throw DimensionError("shrinkage_weights: sample and target dimensions differ");
  Vector w = alpha.value * w_sample.weights + (1.0 - alpha.value) * b.weights;
  const Strategy tag =
      alpha.kind == IntensityKind::fm ? Strategy::fm_shrinkage : Strategy::bps_shrinkage;
  return PortfolioWeights(std::move(w), tag);
}

// All four strategies estimated from one in-sample window.
struct StrategyEstimates {
  PortfolioWeights traditional;
  PortfolioWeights fm;
  PortfolioWeights bps;
  PortfolioWeights target;
  ShrinkageIntensity fm_alpha;
  ShrinkageIntensity bps_alpha;

  std::map<Strategy, PortfolioWeights> as_map() const {
    return {{Strategy::traditional, traditional},
            {Strategy::fm_shrinkage, fm},
            {Strategy::bps_shrinkage, bps},
            {Strategy::target, target}};
  }
};

inline StrategyEstimates estimate_all(const ReturnsWindow& window, const PortfolioWeights& b) {
  const Index p = window.asset_count();
  const Index n = window.length();
  if (n <= p + 2)
    throw InsufficientDataError("estimate_all: need T > p + 2, got p=" + std::to_string(p) +
                                ", T=" + std::to_string(n));
  const CovarianceEstimate s = sample_covariance(window);
  const SpdSolver solver(s.matrix, detail::cov_context(s));

  const Vector x = solver.solve(Vector::Ones(p));
  PortfolioWeights w_sample(x / x.sum(), Strategy::traditional);

  const WindowQuadforms q = window_quadforms(solver, s, b);
  const ShrinkageIntensity a_fm = fm_intensity_from(q, p, n);
  const ShrinkageIntensity a_bps = bps_intensity_from(q, p, n);

  PortfolioWeights w_fm = shrinkage_weights(a_fm, w_sample, b);
  PortfolioWeights w_bps = shrinkage_weights(a_bps, w_sample, b);
  PortfolioWeights target(b.weights, Strategy::target);

  return StrategyEstimates{std::move(w_sample), std::move(w_fm), std::move(w_bps),
                           std::move(target), a_fm, a_bps};
}

}  // namespace hdgmv
