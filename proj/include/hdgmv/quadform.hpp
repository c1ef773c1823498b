#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "hdgmv/detail/parallel.hpp"
#include "hdgmv/detail/stats.hpp"
#include "hdgmv/linalg.hpp"
#include "hdgmv/moments.hpp"
#include "hdgmv/rng.hpp"
#include "hdgmv/types.hpp"

// Monte Carlo verification of the two quadratic-form concentration results
// behind the empirical performance-measure limits. For standard-entry data
// matrices X (p x n in-sample, p x m out-of-sample) and bounded nonrandom
// vectors xi, theta:
//
//   xi' A^{-1} B A^{-1} theta -> (1-c)^{-3} xi' theta     (sandwich form)
//   xi' A^{-1} B        theta -> (1-c)^{-1} xi' theta     (single form)
//
// with c = p/n, where (A, B) are either the non-centered Gram matrices
// (X X'/n, X_out X_out'/m) or their mean-centered sample-covariance
// counterparts; both variants share the same limits. The mean-centered proof
// additionally needs xbar_out' A^{-1} theta -> 0, checked separately.

namespace hdgmv {

struct QuadformCase {
  Index p;
  Index n;
  Index m;
  Vector xi;
  Vector theta;
  int repetitions;
  SeedSpec seed;
  double norm_bound = 100.0;  // the lemmas assume bounded ||xi||, ||theta||

  void validate() const {
    if (p < 1 || n <= p || m < 2)
      throw DomainError("QuadformCase: need n > p >= 1 and m >= 2");
    if (xi.size() != p || theta.size() != p)
      throw DimensionError("QuadformCase: xi/theta must be p-vectors");
    if (xi.norm() > norm_bound || theta.norm() > norm_bound)
      throw DomainError("QuadformCase: ||xi|| or ||theta|| exceeds the bound " +
                        std::to_string(norm_bound));
    if (repetitions < 1) throw DomainError("QuadformCase: repetitions must be positive");
  }
};

struct QuadformStats {
  double limit = 0.0;
  double mc_mean = 0.0;
  double std_error = 0.0;
  double abs_deviation = 0.0;
};

struct QuadformReport {
  QuadformStats sandwich_raw;
  QuadformStats sandwich_centered;
  QuadformStats single_raw;
  QuadformStats single_centered;
  QuadformStats cross_mean;  // mean |xbar_out' V^{-1} theta|, limit 0
};

namespace detail {

struct QuadformDraw {
  double sandwich_raw;
  double sandwich_centered;
  double single_raw;
  double single_centered;
  double cross_mean_abs;
};

inline Matrix standard_panel(RngStream& rng, Index p, Index cols) {
  Matrix x(p, cols);
  for (Index t = 0; t < cols; ++t)
    for (Index i = 0; i < p; ++i) x(i, t) = rng.normal();
  return x;
}

inline Matrix gram_over(const Matrix& x) {
  Matrix g = Matrix::Zero(x.rows(), x.rows());
  g.selfadjointView<Eigen::Lower>().rankUpdate(x, 1.0 / static_cast<double>(x.cols()));
  g.triangularView<Eigen::Upper>() = g.transpose();
  return g;
}

// One repetition; a singular in-sample draw is redrawn from the same stream
// up to three times before giving up.
inline QuadformDraw quadform_repetition(const QuadformCase& c, const SeedSpec& rep_seed) {
  RngStream rng(rep_seed);
  for (int attempt = 0;; ++attempt) {
    const Matrix x_in = standard_panel(rng, c.p, c.n);
    const Matrix x_out = standard_panel(rng, c.p, c.m);
    try {
      const Matrix gram_in = gram_over(x_in);
      const Matrix cov_in = sample_covariance_of(x_in);
      const Matrix gram_out = gram_over(x_out);
      const Matrix cov_out = sample_covariance_of(x_out);

      const SpdSolver raw(gram_in, "quadform gram (p=" + std::to_string(c.p) + ")");
      const SpdSolver centered(cov_in, "quadform covariance (p=" + std::to_string(c.p) + ")");

      const Vector raw_xi = raw.solve(c.xi), raw_theta = raw.solve(c.theta);
      const Vector cen_xi = centered.solve(c.xi), cen_theta = centered.solve(c.theta);
      const Vector xbar_out = x_out.rowwise().mean();

      QuadformDraw d;
      d.sandwich_raw = raw_xi.dot(gram_out * raw_theta);
      d.sandwich_centered = cen_xi.dot(cov_out * cen_theta);
      d.single_raw = raw_xi.dot(gram_out * c.theta);
      d.single_centered = cen_xi.dot(cov_out * c.theta);
      d.cross_mean_abs = std::abs(xbar_out.dot(cen_theta));
      return d;
    } catch (const SingularMatrixError&) {
      if (attempt >= 3) throw;
    }
  }
}

inline QuadformStats summarize(const std::vector<double>& values, double limit) {
  const MeanAndError me = mean_and_error(values);
  return QuadformStats{limit, me.mean, me.std_error, std::abs(me.mean - limit)};
}

}  // namespace detail

inline QuadformReport run_quadform_case(const QuadformCase& c, int threads = 0) {
  c.validate();
  const double conc = static_cast<double>(c.p) / static_cast<double>(c.n);
  const double xt = c.xi.dot(c.theta);
  const double limit_sandwich = xt / std::pow(1.0 - conc, 3);
  const double limit_single = xt / (1.0 - conc);

  std::vector<detail::QuadformDraw> draws(static_cast<std::size_t>(c.repetitions));
  detail::parallel_for_index(c.repetitions, threads, [&](std::int64_t i) {
    draws[static_cast<std::size_t>(i)] =
        detail::quadform_repetition(c, c.seed.with(static_cast<std::uint64_t>(i)));
  });

  const auto collect = [&](auto member) {
    std::vector<double> v(draws.size());
    for (std::size_t i = 0; i < draws.size(); ++i) v[i] = draws[i].*member;
    return v;
  };

  QuadformReport r;
  r.sandwich_raw = detail::summarize(collect(&detail::QuadformDraw::sandwich_raw), limit_sandwich);
  r.sandwich_centered =
      detail::summarize(collect(&detail::QuadformDraw::sandwich_centered), limit_sandwich);
  r.single_raw = detail::summarize(collect(&detail::QuadformDraw::single_raw), limit_single);
  r.single_centered =
      detail::summarize(collect(&detail::QuadformDraw::single_centered), limit_single);
  r.cross_mean = detail::summarize(collect(&detail::QuadformDraw::cross_mean_abs), 0.0);
  return r;
}

// Absolute deviation of the Monte Carlo mean of the sandwich form from
// (1-c)^{-3} xi' theta.
inline double quadform_sandwich_error(const QuadformCase& c, bool centered, int threads = 0) {
  const QuadformReport r = run_quadform_case(c, threads);
  return centered ? r.sandwich_centered.abs_deviation : r.sandwich_raw.abs_deviation;
}

// Absolute deviation of the single form from (1-c)^{-1} xi' theta.
inline double quadform_single_error(const QuadformCase& c, bool centered, int threads = 0) {
  const QuadformReport r = run_quadform_case(c, threads);
  return centered ? r.single_centered.abs_deviation : r.single_raw.abs_deviation;
}

// Monte Carlo mean of |xbar_out' V^{-1} theta|; shrinks like O(1/sqrt(m)).
inline double cross_mean_form_error(const QuadformCase& c, int threads = 0) {
  return run_quadform_case(c, threads).cross_mean.mc_mean;
}

}  // namespace hdgmv
