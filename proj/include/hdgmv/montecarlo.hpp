#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "hdgmv/datagen.hpp"
#include "hdgmv/detail/parallel.hpp"
#include "hdgmv/detail/stats.hpp"
#include "hdgmv/estimators.hpp"
#include "hdgmv/limits.hpp"
#include "hdgmv/moments.hpp"
#include "hdgmv/risk.hpp"
#include "hdgmv/rng.hpp"

// Monte Carlo reproduction of the simulation study: over a grid of
// (n, c, c_tilde) cells, repeatedly simulate an in-sample window of n and a
// disjoint evaluation window of m observations from one contiguous path,
// compute the empirical out-of-sample losses of the four strategies, and
// divide the mean pairwise loss differences by their asymptotic limits. The
// simulator knows the population covariance, so each cell also carries the
// true out-of-sample measures and the exact target loss L_b entering the
// limit formulas.

namespace hdgmv {

enum class Scenario { t5, var1, ccc_garch };

inline const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::t5:
      return "t5";
    case Scenario::var1:
      return "var1";
    case Scenario::ccc_garch:
      return "ccc_garch";
  }
  return "?";
}

inline Scenario parse_scenario(const std::string& name) {
  if (name == "t5") return Scenario::t5;
  if (name == "var1") return Scenario::var1;
  if (name == "ccc_garch") return Scenario::ccc_garch;
  throw ConfigError("unknown scenario '" + name + "' (expected t5, var1, ccc_garch)");
}

struct SimulationConfig {
  Scenario scenario = Scenario::t5;
  std::vector<Index> n_grid;
  std::vector<double> c_grid;
  std::vector<double> c_tilde_grid;
  int repetitions = 1000;
  std::uint64_t master_seed = 0;
  bool seed_set = false;  // wall-clock seeding is never used; a seed is mandatory
  int threads = 0;
  std::map<std::string, double> tolerance_overrides;

  void validate() const {
    if (!seed_set) throw ConfigError("simulation config: master_seed is required");
    if (repetitions < 2) throw ConfigError("simulation config: repetitions must be >= 2");
    for (Index n : n_grid)
      if (n < 2) throw ConfigError("simulation config: n must be >= 2");
    for (double c : c_grid)
      if (!(c > 0.0 && c < 1.0)) throw ConfigError("simulation config: c must lie in (0,1)");
    for (double ct : c_tilde_grid)
      if (!(ct > 0.0 && ct < 1.0))
        throw ConfigError("simulation config: c_tilde must lie in (0,1) for the loss path");
  }
};

// p = round(n c), m = round(p / c_tilde); ties round half away from zero.
inline std::pair<Index, Index> derive_cell_dimensions(Index n, double c, double c_tilde) {
  if (!(c > 0.0 && c < 1.0)) throw DomainError("derive_cell_dimensions: c must lie in (0,1)");
  if (!(c_tilde > 0.0)) throw DomainError("derive_cell_dimensions: c_tilde must be positive");
  const auto round_half_away = [](double x) {
    return static_cast<Index>(x >= 0.0 ? std::floor(x + 0.5) : std::ceil(x - 0.5));
  };
  const Index p = round_half_away(static_cast<double>(n) * c);
  const Index m = round_half_away(static_cast<double>(p) / c_tilde);
  if (p < 2 || m < 2)
    throw DomainError("derive_cell_dimensions: degenerate cell p=" + std::to_string(p) +
                      ", m=" + std::to_string(m));
  return {p, m};
}

struct CellSpec {
  Scenario scenario = Scenario::t5;
  Index n = 0;
  double c = 0.0;
  double c_tilde = 0.0;
  Index p = 0;
  Index m = 0;
  std::uint64_t cell_index = 0;

  std::string id() const {
    return std::string(scenario_name(scenario)) + "_n" + std::to_string(n) + "_p" +
           std::to_string(p) + "_m" + std::to_string(m);
  }
};

// Everything fixed across the repetitions of one cell: the drawn model
// parameters, the scenario's unconditional covariance, and the exact target
// loss. Parameters are drawn once per cell, as in the study design.
struct CellModel {
  Scenario scenario;
  ModelParams params;
  std::optional<Var1Model> var1;
  std::optional<GarchModel> garch;
  CovarianceEstimate unconditional;
  PortfolioWeights target;
  double ones_qf_true;  // 1' Sigma_u^{-1} 1
  double v_gmv_true;
  double l_b_true;
};

namespace detail {

// Sub-labels under the per-cell parameter stream.
inline constexpr std::uint64_t kParamStream = 0;
inline constexpr std::uint64_t kMuLabel = 1;
inline constexpr std::uint64_t kSigmaLabel = 2;
inline constexpr std::uint64_t kScenarioLabel = 3;

}  // namespace detail

inline SeedSpec cell_seed(const SeedSpec& master, std::uint64_t cell_index) {
  return master.with(cell_index);
}

inline SeedSpec repetition_seed(const SeedSpec& master, std::uint64_t cell_index,
                                std::uint64_t repetition) {
  return master.with(cell_index).with(repetition + 1);
}

inline CellModel make_cell_model(Scenario scenario, Index p, const SeedSpec& params_seed) {
  const SeedSpec base = params_seed.with(detail::kParamStream);
  MeanVector mu = random_mean(p, base.with(detail::kMuLabel));
  CovarianceEstimate sigma = random_covariance(p, base.with(detail::kSigmaLabel));
  ModelParams params = make_model_params(std::move(mu), std::move(sigma));

  std::optional<Var1Model> var1;
  std::optional<GarchModel> garch;
  CovarianceEstimate unconditional = params.sigma;
  if (scenario == Scenario::var1) {
    var1 = make_var1_model(params, random_var_params(p, base.with(detail::kScenarioLabel)));
    unconditional = var1->unconditional;
  } else if (scenario == Scenario::ccc_garch) {
    garch = make_garch_model(params,
                             random_garch_params(params.sigma, base.with(detail::kScenarioLabel)));
  }

  PortfolioWeights target = equally_weighted_target(p);
  const SpdSolver solver(unconditional.matrix, "unconditional covariance (p=" + std::to_string(p) + ")");
  const double ones_qf = ones_quadform_inverse(solver, p);
  const double v_b = target.weights.dot(unconditional.matrix * target.weights);
  CellModel model{scenario,
                  std::move(params),
                  std::move(var1),
                  std::move(garch),
                  std::move(unconditional),
                  std::move(target),
                  ones_qf,
                  1.0 / ones_qf,
                  ones_qf * v_b - 1.0};
  return model;
}

inline ReturnsWindow simulate_path(const CellModel& model, Index t_len, const SeedSpec& seed) {
  switch (model.scenario) {
    case Scenario::t5:
      return simulate_scenario1(model.params, t_len, seed);
    case Scenario::var1:
      return simulate_var1(*model.var1, t_len, seed);
    case Scenario::ccc_garch:
      return simulate_ccc_garch(*model.garch, t_len, seed);
  }
  throw ConfigError("simulate_path: unknown scenario");
}

// Fixed strategy order used by all per-repetition arrays.
inline constexpr std::array<Strategy, 4> kStrategyOrder = {
    Strategy::traditional, Strategy::fm_shrinkage, Strategy::bps_shrinkage, Strategy::target};

struct RepetitionMeasurements {
  std::array<double, 4> empirical_variance;
  std::array<double, 4> empirical_loss;
  std::array<double, 4> true_variance;
  std::array<double, 4> true_loss;
  double fm_alpha;
  double bps_alpha;
};

// One repetition: a contiguous path of n+m observations (time dependence in
// scenarios 2-3 spans the window boundary), estimation on the first n columns,
// evaluation on the last m. The evaluation-window solve is shared across the
// four strategies.
inline RepetitionMeasurements run_repetition_measurements(const CellModel& model, Index n, Index m,
                                                          const SeedSpec& seed) {
  const Index p = model.params.sigma.dimension();
  if (n <= p)
    throw ConfigError("run_repetition: in-sample covariance would be singular (n=" +
                      std::to_string(n) + " <= p=" + std::to_string(p) + ")");
  const ReturnsWindow path = simulate_path(model, n + m, seed);
  const ReturnsWindow in_window(path.values.leftCols(n));
  const StrategyEstimates estimates = estimate_all(in_window, model.target);

  const CovarianceEstimate s_out(sample_covariance_of(path.values.rightCols(m)), m,
                                 CovarianceKind::out_of_sample);
  const SpdSolver out_solver(s_out.matrix, detail::cov_context(s_out));
  const double ones_qf_out = ones_quadform_inverse(out_solver, p);
  const double correction = 1.0 - static_cast<double>(p) / static_cast<double>(m);

  const std::array<const PortfolioWeights*, 4> weights = {&estimates.traditional, &estimates.fm,
                                                          &estimates.bps, &estimates.target};
  RepetitionMeasurements rec;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const Vector& w = weights[k]->weights;
    const double emp_var = w.dot(s_out.matrix * w);
    const double true_var = w.dot(model.unconditional.matrix * w);
    rec.empirical_variance[k] = emp_var;
    rec.empirical_loss[k] = correction * ones_qf_out * emp_var - 1.0;
    rec.true_variance[k] = true_var;
    rec.true_loss[k] = model.ones_qf_true * true_var - 1.0;
  }
  rec.fm_alpha = estimates.fm_alpha.value;
  rec.bps_alpha = estimates.bps_alpha.value;
  return rec;
}

inline std::vector<PerformanceRecord> run_repetition(const CellModel& model, Index n, Index m,
                                                     const SeedSpec& seed) {
  const RepetitionMeasurements rec = run_repetition_measurements(model, n, m, seed);
  std::vector<PerformanceRecord> out;
  out.reserve(kStrategyOrder.size());
  for (std::size_t k = 0; k < kStrategyOrder.size(); ++k)
    out.push_back(PerformanceRecord{kStrategyOrder[k], rec.true_variance[k], rec.true_loss[k],
                                    rec.empirical_variance[k], rec.empirical_loss[k]});
  return out;
}

struct CellResult {
  CellSpec spec;
  int repetitions = 0;
  std::array<double, 4> mean_empirical_loss{};
  std::array<double, 4> se_empirical_loss{};
  std::array<double, 4> mean_empirical_variance{};
  std::array<double, 4> mean_true_loss{};
  std::array<double, 4> se_true_loss{};
  // Pairwise differences of mean empirical losses in the order
  // (s - fm, s - bps, fm - bps), their standard errors, the asymptotic
  // limits at (c = p/n, L_b), and the difference-to-limit ratios.
  std::array<double, 3> difference{};
  std::array<double, 3> difference_se{};
  std::array<double, 3> difference_limit{};
  std::array<double, 3> ratio_to_limit{};
  double ordering_fraction = 0.0;  // share of repetitions with bps <= fm <= s
  double v_gmv_true = 0.0;
  double l_b_true = 0.0;
  int fm_alpha_outside_unit = 0;
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
};

inline CellResult run_cell(const SimulationConfig& config, const CellSpec& spec) {
  CellResult result;
  result.spec = spec;
  result.repetitions = config.repetitions;

  const SeedSpec master{config.master_seed, {}};
  const CellModel model = make_cell_model(spec.scenario, spec.p, cell_seed(master, spec.cell_index));
  result.v_gmv_true = model.v_gmv_true;
  result.l_b_true = model.l_b_true;

  const int reps = config.repetitions;
  std::vector<RepetitionMeasurements> records(static_cast<std::size_t>(reps));
  detail::parallel_for_index(reps, config.threads, [&](std::int64_t i) {
    records[static_cast<std::size_t>(i)] = run_repetition_measurements(
        model, spec.n, spec.m, repetition_seed(master, spec.cell_index, static_cast<std::uint64_t>(i)));
  });

  const auto column = [&](const auto& member, std::size_t k) {
    std::vector<double> v(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) v[i] = (records[i].*member)[k];
    return v;
  };

  for (std::size_t k = 0; k < 4; ++k) {
    const auto emp = detail::mean_and_error(column(&RepetitionMeasurements::empirical_loss, k));
    result.mean_empirical_loss[k] = emp.mean;
    result.se_empirical_loss[k] = emp.std_error;
    const auto tru = detail::mean_and_error(column(&RepetitionMeasurements::true_loss, k));
    result.mean_true_loss[k] = tru.mean;
    result.se_true_loss[k] = tru.std_error;
    result.mean_empirical_variance[k] =
        detail::mean_and_error(column(&RepetitionMeasurements::empirical_variance, k)).mean;
  }

  // Differences of the strategy means (equal to means of per-repetition
  // differences up to rounding); standard errors from the per-repetition
  // difference samples.
  const std::array<std::pair<std::size_t, std::size_t>, 3> pairs = {{{0, 1}, {0, 2}, {1, 2}}};
  const std::array<DifferencePair, 3> pair_ids = {
      DifferencePair::s_minus_fm, DifferencePair::s_minus_bps, DifferencePair::fm_minus_bps};
  const double realized_c = static_cast<double>(spec.p) / static_cast<double>(spec.n);
  int ordered = 0;
  for (const auto& rec : records) {
    if (rec.empirical_loss[2] <= rec.empirical_loss[1] &&
        rec.empirical_loss[1] <= rec.empirical_loss[0])
      ++ordered;
    if (rec.fm_alpha < 0.0 || rec.fm_alpha > 1.0) ++result.fm_alpha_outside_unit;
  }
  result.ordering_fraction = static_cast<double>(ordered) / static_cast<double>(records.size());

  for (std::size_t d = 0; d < 3; ++d) {
    const auto [a, b] = pairs[d];
    result.difference[d] = result.mean_empirical_loss[a] - result.mean_empirical_loss[b];
    std::vector<double> diffs(records.size());
    for (std::size_t i = 0; i < records.size(); ++i)
      diffs[i] = records[i].empirical_loss[a] - records[i].empirical_loss[b];
    result.difference_se[d] = detail::mean_and_error(diffs).std_error;
    result.difference_limit[d] =
        limit_loss_difference(pair_ids[d], realized_c, model.l_b_true);
    result.ratio_to_limit[d] = result.difference[d] / result.difference_limit[d];
  }
  return result;
}

struct StudyResult {
  SimulationConfig config;
  std::vector<CellResult> cells;
};

// Deterministic cell order: n (outer), c, c_tilde (inner), as configured.
inline std::vector<CellSpec> enumerate_cells(const SimulationConfig& config) {
  std::vector<CellSpec> cells;
  std::uint64_t index = 0;
  for (Index n : config.n_grid)
    for (double c : config.c_grid)
      for (double ct : config.c_tilde_grid) {
        CellSpec spec;
        spec.scenario = config.scenario;
        spec.n = n;
        spec.c = c;
        spec.c_tilde = ct;
        spec.cell_index = index++;
        try {
          std::tie(spec.p, spec.m) = derive_cell_dimensions(n, c, ct);
        } catch (const Error&) {
          spec.p = spec.m = 0;  // recorded as a cell error downstream
        }
        cells.push_back(spec);
      }
  return cells;
}

inline StudyResult run_study(const SimulationConfig& config) {
  config.validate();
  StudyResult study;
  study.config = config;
  for (const CellSpec& spec : enumerate_cells(config)) {
    if (spec.p == 0) {
      CellResult bad;
      bad.spec = spec;
      bad.error = "degenerate cell dimensions";
      study.cells.push_back(std::move(bad));
      continue;
    }
    try {
      study.cells.push_back(run_cell(config, spec));
    } catch (const Error& e) {
      CellResult bad;
      bad.spec = spec;
      bad.repetitions = config.repetitions;
      bad.error = e.what();
      study.cells.push_back(std::move(bad));
    }
  }
  return study;
}

}  // namespace hdgmv
