#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "hdgmv/errors.hpp"
#include "hdgmv/types.hpp"

// Closed-form catalogue of the high-dimensional limits of the out-of-sample
// variance and relative loss for the four strategies, plus the limiting
// shrinkage intensities and the pairwise loss differences. The same limits
// hold for the population measures and their empirical counterparts. A target
// that deviates arbitrarily strongly from the GMV portfolio is represented by
// l_b = +infinity; every formula below returns its analytic limit there.

namespace hdgmv {

// The scalars the limit formulas consume. c is the in-sample concentration
// p/n, c_tilde the out-of-sample one p/m (carried for provenance; the limits
// themselves do not depend on it). v_b and l_b describe the target portfolio
// and are required only by the fm/bps/target strategies.
struct AsymptoticInputs {
  double c;
  double c_tilde = std::numeric_limits<double>::quiet_NaN();
  double v_gmv = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> v_b;
  std::optional<double> l_b;

  void validate() const {
    if (!(c > 0.0 && c < 1.0))
      throw DomainError("AsymptoticInputs: c must lie in (0,1), got " + std::to_string(c));
    if (v_b && l_b && std::isfinite(*l_b)) {
      if (!(v_gmv > 0.0)) throw DomainError("AsymptoticInputs: v_gmv must be positive");
      const double implied = *v_b / v_gmv - 1.0;
      if (std::abs(implied - *l_b) > 1e-12 * std::max(1.0, std::abs(*l_b)))
        throw DomainError("AsymptoticInputs: l_b inconsistent with v_b/v_gmv - 1");
    }
  }
};

inline AsymptoticInputs make_asymptotic_inputs(double c, double v_gmv, double v_b,
                                               double c_tilde = std::numeric_limits<double>::quiet_NaN()) {
  AsymptoticInputs in;
  in.c = c;
  in.c_tilde = c_tilde;
  in.v_gmv = v_gmv;
  in.v_b = v_b;
  in.l_b = v_b / v_gmv - 1.0;
  in.validate();
  return in;
}

namespace detail {

inline void check_c(double c) {
  if (!(c > 0.0 && c < 1.0))
    throw DomainError("limit: concentration c must lie in (0,1), got " + std::to_string(c) +
                      " (the c -> {0,1} boundaries are handled analytically elsewhere)");
}

inline void check_lb(double l_b) {
  if (std::isnan(l_b) || l_b < 0.0)
    throw DomainError("limit: target relative loss l_b must be >= 0, got " + std::to_string(l_b));
}

}  // namespace detail

// Limiting FM intensity: L_b / (L_b + c).
inline double limit_alpha_fm(double c, double l_b) {
  detail::check_c(c);
  detail::check_lb(l_b);
  if (std::isinf(l_b)) return 1.0;
  return l_b / (l_b + c);
}

// Limiting BPS intensity: (1-c) L_b / (c + (1-c) L_b).
inline double limit_alpha_bps(double c, double l_b) {
  detail::check_c(c);
  detail::check_lb(l_b);
  if (std::isinf(l_b)) return 1.0;
  return (1.0 - c) * l_b / (c + (1.0 - c) * l_b);
}

// Shared composite for the two shrinkage strategies:
//   alpha^2 * c/(1-c) + (1-alpha)^2 * L_b,
// evaluated at the strategy's limiting alpha. At l_b = inf both intensities
// tend to one and the composite tends to c/(1-c).
inline double limit_shrinkage_loss(double alpha, double c, double l_b) {
  if (std::isinf(l_b)) return c / (1.0 - c);
  return alpha * alpha * c / (1.0 - c) + (1.0 - alpha) * (1.0 - alpha) * l_b;
}

inline double require_l_b(const AsymptoticInputs& in, const char* who) {
  if (!in.l_b) throw DomainError(std::string(who) + ": inputs lack l_b for the requested strategy");
  detail::check_lb(*in.l_b);
  return *in.l_b;
}

inline double require_v_b(const AsymptoticInputs& in, const char* who) {
  if (!in.v_b) throw DomainError(std::string(who) + ": inputs lack v_b for the requested strategy");
  return *in.v_b;
}

// Limiting out-of-sample relative loss (the empirical counterpart shares it):
//   traditional -> c/(1-c), covariance-free;
//   fm/bps      -> the composite above;
//   target      -> L_b.
inline double limit_oos_loss(Strategy strategy, const AsymptoticInputs& in) {
  in.validate();
  switch (strategy) {
    case Strategy::traditional:
      return in.c / (1.0 - in.c);
    case Strategy::fm_shrinkage: {
      const double l_b = require_l_b(in, "limit_oos_loss");
      return limit_shrinkage_loss(limit_alpha_fm(in.c, l_b), in.c, l_b);
    }
    case Strategy::bps_shrinkage: {
      const double l_b = require_l_b(in, "limit_oos_loss");
      return limit_shrinkage_loss(limit_alpha_bps(in.c, l_b), in.c, l_b);
    }
    case Strategy::target:
      return require_l_b(in, "limit_oos_loss");
  }
  throw DomainError("limit_oos_loss: unknown strategy");
}

// Limiting out-of-sample variance, = V_GMV * (1 + limiting loss) throughout:
//   traditional -> V_GMV / (1-c);
//   fm/bps      -> V_GMV + alpha^2 c/(1-c) V_GMV + (1-alpha)^2 (V_b - V_GMV);
//   target      -> V_b.
inline double limit_oos_variance(Strategy strategy, const AsymptoticInputs& in) {
  in.validate();
  if (!(in.v_gmv > 0.0)) throw DomainError("limit_oos_variance: v_gmv must be positive");
  if (strategy == Strategy::target) return require_v_b(in, "limit_oos_variance");
  return in.v_gmv * (1.0 + limit_oos_loss(strategy, in));
}

enum class DifferencePair { s_minus_fm, s_minus_bps, fm_minus_bps };

inline const char* difference_pair_name(DifferencePair pair) {
  switch (pair) {
    case DifferencePair::s_minus_fm:
      return "s_minus_fm";
    case DifferencePair::s_minus_bps:
      return "s_minus_bps";
    case DifferencePair::fm_minus_bps:
      return "fm_minus_bps";
  }
  return "?";
}

// Limiting pairwise loss differences; all nonnegative on (0,1) x [0,inf]:
//   s - fm   -> c^2 (c + L_b + c L_b) / ((1-c)(c + L_b)^2)
//   s - bps  -> c^2 / ((1-c)(c + (1-c) L_b))
//   fm - bps -> c^4 L_b^2 / ((1-c)(c + L_b)^2 (c + (1-c) L_b))
// Each tends to 0 as l_b -> inf (the equality case of a too-distant target).
inline double limit_loss_difference(DifferencePair pair, double c, double l_b) {
  detail::check_c(c);
  detail::check_lb(l_b);
  if (std::isinf(l_b)) return 0.0;
  const double one_minus_c = 1.0 - c;
  switch (pair) {
    case DifferencePair::s_minus_fm: {
      const double denom = one_minus_c * (c + l_b) * (c + l_b);
      return c * c * (c + l_b + c * l_b) / denom;
    }
    case DifferencePair::s_minus_bps:
      return c * c / (one_minus_c * (c + one_minus_c * l_b));
    case DifferencePair::fm_minus_bps: {
      const double denom =
          one_minus_c * (c + l_b) * (c + l_b) * (c + one_minus_c * l_b);
      return c * c * c * c * l_b * l_b / denom;
    }
  }
  throw DomainError("limit_loss_difference: unknown pair");
}

// Boundary behaviour as the concentration approaches one: the traditional and
// FM losses blow up like c/(1-c) while the BPS loss settles at L_b. Reported
// as an evaluation at c = 1 - epsilon with divergence flags for the two
// unbounded strategies.
struct NearUnitConcentration {
  double c;
  double traditional_loss;
  double fm_loss;
  double bps_loss;
  bool traditional_diverges;
  bool fm_diverges;
};

inline NearUnitConcentration limit_fm_as_c_to_one(double l_b, double epsilon = 1e-3) {
  detail::check_lb(l_b);
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw DomainError("limit_fm_as_c_to_one: epsilon must lie in (0,1)");
  const double c = 1.0 - epsilon;
  NearUnitConcentration out;
  out.c = c;
  out.traditional_loss = c / (1.0 - c);
  out.fm_loss = limit_shrinkage_loss(limit_alpha_fm(c, l_b), c, l_b);
  out.bps_loss = limit_shrinkage_loss(limit_alpha_bps(c, l_b), c, l_b);
  out.traditional_diverges = true;
  out.fm_diverges = l_b > 0.0;  // at l_b = 0 the FM loss collapses to 0 identically
  return out;
}

}  // namespace hdgmv
