#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "hdgmv/linalg.hpp"
#include "hdgmv/rng.hpp"
#include "hdgmv/types.hpp"

// Synthetic return panels for the three data-generating processes used in the
// Monte Carlo study: iid heavy-tailed returns, a diagonal VAR(1), and a
// CCC-GARCH(1,1). Every generator is a pure function of (parameters, T, seed);
// panels are filled column by column, entry by entry, so a fixed SeedSpec
// reproduces a panel exactly.

namespace hdgmv {

// Population mean, covariance, and the cached principal square root of the
// covariance used by the stochastic representation y = mu + Sigma^{1/2} x.
struct ModelParams {
  MeanVector mu;
  CovarianceEstimate sigma;
  Matrix sigma_root;
};

inline ModelParams make_model_params(MeanVector mu, CovarianceEstimate sigma) {
  if (mu.values.size() != sigma.dimension())
    throw DimensionError("make_model_params: mu and sigma dimensions differ");
  Matrix root = spd_sqrt(sigma.matrix);
  const double err = (root * root - sigma.matrix).norm();
  if (err > 1e-8 * std::max(1.0, sigma.matrix.norm()))
    throw SingularMatrixError("make_model_params: square root residual " + std::to_string(err));
  return ModelParams{std::move(mu), std::move(sigma), std::move(root)};
}

// Diagonal of the VAR(1) transition matrix; |gamma_i| < 1 for stationarity.
struct VarParams {
  Vector gamma;

  explicit VarParams(Vector g) : gamma(std::move(g)) {
    if (gamma.size() == 0 || !gamma.allFinite() || gamma.cwiseAbs().maxCoeff() >= 1.0)
      throw DomainError("VarParams: need |gamma_i| < 1 for every component");
  }
};

// Per-asset GARCH(1,1) coefficients and the constant conditional correlation.
struct GarchParams {
  Vector alpha0;
  Vector alpha1;
  Vector beta1;
  Matrix corr;

  GarchParams(Vector a0, Vector a1, Vector b1, Matrix c)
      : alpha0(std::move(a0)), alpha1(std::move(a1)), beta1(std::move(b1)), corr(std::move(c)) {
    const Index p = alpha0.size();
    if (alpha1.size() != p || beta1.size() != p || corr.rows() != p || corr.cols() != p)
      throw DimensionError("GarchParams: coefficient dimensions differ");
    if (alpha0.minCoeff() <= 0.0) throw DomainError("GarchParams: alpha0 must be positive");
    if (((alpha1 + beta1).array() >= 1.0).any() || alpha1.minCoeff() < 0.0 ||
        beta1.minCoeff() < 0.0)
      throw DomainError("GarchParams: stationarity requires 0 <= alpha1, beta1, alpha1+beta1 < 1");
    if ((corr.diagonal().array() - 1.0).abs().maxCoeff() > 1e-12)
      throw DomainError("GarchParams: corr must have unit diagonal");
  }
};

// ---------------------------------------------------------------------------
// Parameter draws
// ---------------------------------------------------------------------------

// iid U(-0.1, 0.1) mean entries.
inline MeanVector random_mean(Index p, const SeedSpec& seed) {
  if (p < 1) throw DomainError("random_mean: p must be positive");
  RngStream rng(seed);
  Vector mu(p);
  for (Index i = 0; i < p; ++i) mu[i] = rng.uniform(-0.1, 0.1);
  return MeanVector(std::move(mu));
}

// Random SPD covariance with a controlled spectrum: a Haar-distributed
// orthogonal basis (QR of a Gaussian matrix with the sign correction) and
// eigenvalues log-uniform on [0.1, 10], so the GMV/target variances stay
// uniformly bounded in p by construction.
inline CovarianceEstimate random_covariance(Index p, const SeedSpec& seed,
                                            double lambda_min = 0.1, double lambda_max = 10.0) {
  if (p < 2) throw DomainError("random_covariance: p must be >= 2");
  if (!(lambda_min > 0.0 && lambda_max > lambda_min))
    throw DomainError("random_covariance: need 0 < lambda_min < lambda_max");
  RngStream rng(seed);
  Matrix g(p, p);
  for (Index j = 0; j < p; ++j)
    for (Index i = 0; i < p; ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < p; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);

  Vector lambda(p);
  const double lo = std::log(lambda_min), hi = std::log(lambda_max);
  for (Index i = 0; i < p; ++i) lambda[i] = std::exp(rng.uniform(lo, hi));

  Matrix sigma = q * lambda.asDiagonal() * q.transpose();
  sigma = ((sigma + sigma.transpose()) * 0.5).eval();  // exact symmetry
  return CovarianceEstimate(std::move(sigma), p, CovarianceKind::population);
}

inline Matrix sigma_sqrt(const CovarianceEstimate& sigma) { return spd_sqrt(sigma.matrix); }

inline VarParams random_var_params(Index p, const SeedSpec& seed) {
  RngStream rng(seed);
  Vector gamma(p);
  for (Index i = 0; i < p; ++i) gamma[i] = rng.uniform(-0.9, 0.9);
  return VarParams(std::move(gamma));
}

// Intercepts that pin the stationary mean of h_j at Sigma_jj:
//   alpha0_j = Sigma_jj * (1 - alpha1_j - beta1_j).
inline Vector garch_intercepts(const CovarianceEstimate& sigma, const Vector& alpha1,
                               const Vector& beta1) {
  const Index p = sigma.dimension();
  if (alpha1.size() != p || beta1.size() != p)
    throw DimensionError("garch_intercepts: coefficient dimensions differ");
  if (((alpha1 + beta1).array() >= 1.0).any())
    throw DomainError("garch_intercepts: stationarity requires alpha1 + beta1 < 1");
  return sigma.matrix.diagonal().array() * (1.0 - alpha1.array() - beta1.array());
}

inline Matrix correlation_from_covariance(const Matrix& sigma) {
  const Vector inv_sd = sigma.diagonal().cwiseSqrt().cwiseInverse();
  Matrix corr = inv_sd.asDiagonal() * sigma * inv_sd.asDiagonal();
  corr.diagonal().setOnes();
  return ((corr + corr.transpose()) * 0.5).eval();
}

// alpha1 ~ U(0, 0.1), beta1 ~ U(0.6, 0.7); intercepts calibrated to sigma,
// conditional correlation equal to the correlation matrix of sigma.
inline GarchParams random_garch_params(const CovarianceEstimate& sigma, const SeedSpec& seed) {
  RngStream rng(seed);
  const Index p = sigma.dimension();
  Vector a1(p), b1(p);
  for (Index i = 0; i < p; ++i) a1[i] = rng.uniform(0.0, 0.1);
  for (Index i = 0; i < p; ++i) b1[i] = rng.uniform(0.6, 0.7);
  Vector a0 = garch_intercepts(sigma, a1, b1);
  return GarchParams(std::move(a0), std::move(a1), std::move(b1),
                     correlation_from_covariance(sigma.matrix));
}

// ---------------------------------------------------------------------------
// Scenario 1: iid t(5) innovations rescaled to unit variance
// ---------------------------------------------------------------------------

// Var(t(5)) = 5/3, so sqrt(3/5) x has unit variance.
inline constexpr double kT5Scale = 0.7745966692414834;  // sqrt(3/5)

inline ReturnsWindow simulate_scenario1(const ModelParams& params, Index t_len,
                                        const SeedSpec& seed) {
  if (t_len < 2) throw DomainError("simulate_scenario1: need T >= 2");
  RngStream rng(seed);
  const Index p = params.sigma.dimension();
  Matrix x(p, t_len);
  for (Index t = 0; t < t_len; ++t)
    for (Index i = 0; i < p; ++i) x(i, t) = kT5Scale * rng.student_t(5);
  Matrix panel = params.sigma_root * x;
  panel.colwise() += params.mu.values;
  return ReturnsWindow(std::move(panel));
}

// ---------------------------------------------------------------------------
// Scenario 2: diagonal VAR(1) with Gaussian innovations
// ---------------------------------------------------------------------------

// Stationary covariance of the diagonal VAR(1): Var_ij = Sigma_ij / (1 - g_i g_j),
// the closed form of the Kronecker-vec solution (I - G (x) G)^{-1} vec(Sigma).
inline CovarianceEstimate var1_unconditional_covariance(const VarParams& var,
                                                        const CovarianceEstimate& sigma) {
  const Index p = sigma.dimension();
  if (var.gamma.size() != p)
    throw DimensionError("var1_unconditional_covariance: gamma dimension mismatch");
  Matrix v(p, p);
  for (Index j = 0; j < p; ++j)
    for (Index i = 0; i < p; ++i) v(i, j) = sigma.matrix(i, j) / (1.0 - var.gamma[i] * var.gamma[j]);
  return CovarianceEstimate(std::move(v), sigma.sample_size, CovarianceKind::population);
}

// Per-cell cache: the Cholesky factor of the stationary covariance lets each
// path start exactly stationary, with no burn-in.
struct Var1Model {
  ModelParams params;
  VarParams var;
  CovarianceEstimate unconditional;
  Matrix stationary_chol;
};

inline Var1Model make_var1_model(ModelParams params, VarParams var) {
  CovarianceEstimate uncond = var1_unconditional_covariance(var, params.sigma);
  Eigen::LLT<Matrix> llt(uncond.matrix);
  if (llt.info() != Eigen::Success)
    throw SingularMatrixError("make_var1_model: stationary covariance is not positive definite");
  Matrix chol = llt.matrixL();
  return Var1Model{std::move(params), std::move(var), std::move(uncond), std::move(chol)};
}

inline ReturnsWindow simulate_var1(const Var1Model& model, Index t_len, const SeedSpec& seed) {
  if (t_len < 2) throw DomainError("simulate_var1: need T >= 2");
  RngStream rng(seed);
  const Index p = model.params.sigma.dimension();

  // y_0 - mu ~ N(0, Var(y)); then d_t = Gamma d_{t-1} + Sigma^{1/2} x_t.
  Vector z(p);
  for (Index i = 0; i < p; ++i) z[i] = rng.normal();
  Vector deviation = model.stationary_chol * z;

  Matrix panel(p, t_len);
  Vector x(p);
  for (Index t = 0; t < t_len; ++t) {
    for (Index i = 0; i < p; ++i) x[i] = rng.normal();
    deviation = model.var.gamma.cwiseProduct(deviation) + model.params.sigma_root * x;
    panel.col(t) = model.params.mu.values + deviation;
  }
  return ReturnsWindow(std::move(panel));
}

inline ReturnsWindow simulate_scenario2(const ModelParams& params, const VarParams& var,
                                        Index t_len, const SeedSpec& seed) {
  return simulate_var1(make_var1_model(params, var), t_len, seed);
}

// ---------------------------------------------------------------------------
// Scenario 3: CCC-GARCH(1,1) with Gaussian conditional returns
// ---------------------------------------------------------------------------

// The GARCH stationary law has no closed form; each conditional variance is
// started at its stationary mean Sigma_jj and a fixed burn-in is discarded.
// With alpha1 + beta1 <= 0.8 the slowest transient decays by 0.8^500.
inline constexpr Index kGarchBurnIn = 500;

struct GarchModel {
  ModelParams params;
  GarchParams garch;
  Matrix corr_chol;
};

inline GarchModel make_garch_model(ModelParams params, GarchParams garch) {
  if (garch.alpha0.size() != params.sigma.dimension())
    throw DimensionError("make_garch_model: parameter dimensions differ");
  Eigen::LLT<Matrix> llt(garch.corr);
  if (llt.info() != Eigen::Success)
    throw SingularMatrixError("make_garch_model: conditional correlation is not positive definite");
  Matrix chol = llt.matrixL();
  return GarchModel{std::move(params), std::move(garch), std::move(chol)};
}

inline ReturnsWindow simulate_ccc_garch(const GarchModel& model, Index t_len,
                                        const SeedSpec& seed) {
  if (t_len < 2) throw DomainError("simulate_ccc_garch: need T >= 2");
  RngStream rng(seed);
  const Index p = model.params.sigma.dimension();
  const GarchParams& g = model.garch;

  Vector h = model.params.sigma.matrix.diagonal();
  Vector z(p), eps(p), dev(p);
  Matrix panel(p, t_len);
  for (Index t = -kGarchBurnIn; t < t_len; ++t) {
    for (Index i = 0; i < p; ++i) z[i] = rng.normal();
    eps.noalias() = model.corr_chol * z;                    // correlated N(0, C)
    dev = h.cwiseSqrt().cwiseProduct(eps);                  // y_t - mu | h ~ N(0, D^1/2 C D^1/2)
    if (t >= 0) panel.col(t) = model.params.mu.values + dev;
    h = g.alpha0.array() + g.alpha1.array() * dev.array().square() + g.beta1.array() * h.array();
  }
  return ReturnsWindow(std::move(panel));
}

inline ReturnsWindow simulate_scenario3(const ModelParams& params, const GarchParams& garch,
                                        Index t_len, const SeedSpec& seed) {
  return simulate_ccc_garch(make_garch_model(params, garch), t_len, seed);
}

}  // namespace hdgmv
