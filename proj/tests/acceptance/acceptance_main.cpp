// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Heavy Monte Carlo cells run at the stated scale, so a full pass takes
// several minutes on a desktop.

#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "hdgmv/backtest.hpp"
#include "hdgmv/datagen.hpp"
#include "hdgmv/detail/dates.hpp"
#include "hdgmv/estimators.hpp"
#include "hdgmv/limits.hpp"
#include "hdgmv/montecarlo.hpp"
#include "hdgmv/moments.hpp"
#include "hdgmv/portfolio.hpp"
#include "hdgmv/quadform.hpp"
#include "hdgmv/report_io.hpp"

using namespace hdgmv;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& details) {
  std::printf("[%s] criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              details.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

SimulationConfig cell_config(Scenario scenario, Index n, int reps, std::uint64_t seed) {
  SimulationConfig config;
  config.scenario = scenario;
  config.n_grid = {n};
  config.c_grid = {0.5};
  config.c_tilde_grid = {0.5};
  config.repetitions = reps;
  config.master_seed = seed;
  config.seed_set = true;
  config.threads = 0;
  return config;
}

CellResult run_single_cell(const SimulationConfig& config) {
  return run_cell(config, enumerate_cells(config)[0]);
}

// --------------------------------------------------------------------------
// 1. Traditional-estimator loss limit at p=250, n=m=500
// --------------------------------------------------------------------------
void criterion_1() {
  const SimulationConfig config = cell_config(Scenario::t5, 500, 200, 1001);
  const CellResult cell = run_single_cell(config);
  const bool ok = cell.ok() && std::abs(cell.mean_true_loss[0] - 1.0) <= 0.10 &&
                  std::abs(cell.mean_empirical_loss[0] - 1.0) <= 0.10;
  report(1, "traditional loss limit c/(1-c) at p=250, n=m=500", ok,
         "mean true loss " + fmt(cell.mean_true_loss[0]) + ", mean empirical loss " +
             fmt(cell.mean_empirical_loss[0]) + ", target 1.0 +/- 10%");
}

// --------------------------------------------------------------------------
// 2-3. Scenario 1 ratios and ordering at n=1000, c=c~=0.5, 1000 reps
// --------------------------------------------------------------------------
void criteria_2_3() {
  const SimulationConfig config = cell_config(Scenario::t5, 1000, 1000, 2002);
  const CellResult cell = run_single_cell(config);

  bool ratios_ok = cell.ok();
  for (double r : cell.ratio_to_limit) ratios_ok = ratios_ok && r >= 0.9 && r <= 1.1;
  report(2, "difference-to-limit ratios in [0.9, 1.1] (scenario 1, n=1000)", ratios_ok,
         "ratios s-fm " + fmt(cell.ratio_to_limit[0]) + ", s-bps " + fmt(cell.ratio_to_limit[1]) +
             ", fm-bps " + fmt(cell.ratio_to_limit[2]));

  const bool ordering_ok = cell.ok() &&
                           cell.mean_empirical_loss[2] < cell.mean_empirical_loss[1] &&
                           cell.mean_empirical_loss[1] < cell.mean_empirical_loss[0] &&
                           cell.ordering_fraction >= 0.90;
  report(3, "bps <= fm <= traditional ordering (means strict, >=90% per repetition)",
         ordering_ok,
         "means bps " + fmt(cell.mean_empirical_loss[2]) + " < fm " +
             fmt(cell.mean_empirical_loss[1]) + " < s " + fmt(cell.mean_empirical_loss[0]) +
             "; per-repetition fraction " + fmt(cell.ordering_fraction));
}

// --------------------------------------------------------------------------
// 4. Scenarios 2-3: limits remain lower bounds; linear dependence bites harder
// --------------------------------------------------------------------------
void criterion_4() {
  const CellResult var1 = run_single_cell(cell_config(Scenario::var1, 1000, 1000, 3003));
  const CellResult garch = run_single_cell(cell_config(Scenario::ccc_garch, 1000, 1000, 11));

  bool bounds_ok = var1.ok() && garch.ok();
  for (int d = 0; d < 3; ++d)
    bounds_ok = bounds_ok && var1.ratio_to_limit[d] >= 0.9 && garch.ratio_to_limit[d] >= 0.9;

  int dominant_pairs = 0;
  for (int d = 0; d < 3; ++d) {
    const double se_var1 = var1.difference_se[d] / var1.difference_limit[d];
    const double se_garch = garch.difference_se[d] / garch.difference_limit[d];
    const double slack = 2.0 * std::sqrt(se_var1 * se_var1 + se_garch * se_garch);
    if (var1.ratio_to_limit[d] >= garch.ratio_to_limit[d] - slack) ++dominant_pairs;
  }
  const bool ok = bounds_ok && dominant_pairs >= 2;
  report(4, "scenario 2/3 ratios >= 0.9 with scenario 2 dominating for >= 2 pairs", ok,
         "var1 ratios " + fmt(var1.ratio_to_limit[0]) + "/" + fmt(var1.ratio_to_limit[1]) + "/" +
             fmt(var1.ratio_to_limit[2]) + ", ccc_garch " + fmt(garch.ratio_to_limit[0]) + "/" +
             fmt(garch.ratio_to_limit[1]) + "/" + fmt(garch.ratio_to_limit[2]) +
             ", dominant pairs " + std::to_string(dominant_pairs) + "/3");
}

// --------------------------------------------------------------------------
// 5. Algebraic identity suite over the (c, l_b) grid
// --------------------------------------------------------------------------
void criterion_5() {
  const auto close = [](double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
  };
  bool ok = true;
  std::string detail = "all identities hold to 1e-12";
  const std::vector<double> lbs = {0.0, 0.1, 1.0, 10.0, 50.0};
  for (double c = 0.01; c < 0.995 && ok; c += 0.01) {
    for (double l_b : lbs) {
      const double s_fm = limit_loss_difference(DifferencePair::s_minus_fm, c, l_b);
      const double s_bps = limit_loss_difference(DifferencePair::s_minus_bps, c, l_b);
      const double fm_bps = limit_loss_difference(DifferencePair::fm_minus_bps, c, l_b);
      AsymptoticInputs in;
      in.c = c;
      in.v_gmv = 0.7;
      in.l_b = l_b;
      in.v_b = 0.7 * (1.0 + l_b);
      const double loss_s = limit_oos_loss(Strategy::traditional, in);
      const double loss_fm = limit_oos_loss(Strategy::fm_shrinkage, in);
      const double loss_bps = limit_oos_loss(Strategy::bps_shrinkage, in);

      ok = ok && close(s_bps, s_fm + fm_bps);
      ok = ok && close(loss_s - loss_fm, s_fm) && close(loss_s - loss_bps, s_bps) &&
           close(loss_fm - loss_bps, fm_bps);
      ok = ok && s_fm >= 0.0 && s_bps >= 0.0 && fm_bps >= 0.0;
      for (Strategy s : {Strategy::traditional, Strategy::fm_shrinkage, Strategy::bps_shrinkage,
                         Strategy::target})
        ok = ok && close(limit_oos_variance(s, in), in.v_gmv * (1.0 + limit_oos_loss(s, in)));
      if (!ok) {
        detail = "failure at c=" + fmt(c) + ", l_b=" + fmt(l_b);
        break;
      }
    }
  }
  // Equality cases: c -> 0 and l_b -> infinity drive all differences to zero.
  const double inf = std::numeric_limits<double>::infinity();
  for (DifferencePair pair : {DifferencePair::s_minus_fm, DifferencePair::s_minus_bps,
                              DifferencePair::fm_minus_bps}) {
    for (double l_b : lbs)
      if (limit_loss_difference(pair, 1e-13, l_b) > 1e-12) {
        ok = false;
        detail = "c->0 equality case violated";
      }
    if (limit_loss_difference(pair, 0.5, inf) != 0.0) {
      ok = false;
      detail = "l_b->inf equality case violated";
    }
  }
  if (limit_loss_difference(DifferencePair::fm_minus_bps, 0.5, 0.0) != 0.0) {
    ok = false;
    detail = "fm-bps at l_b=0 should be exactly zero";
  }
  report(5, "algebraic identity suite on the (c, l_b) grid", ok, detail);
}

// --------------------------------------------------------------------------
// 6. Quadratic-form lemma verification at p=400, n=m=800
// --------------------------------------------------------------------------
void criterion_6() {
  QuadformCase c;
  c.p = 400;
  c.n = 800;
  c.m = 800;
  c.xi = Vector::Unit(400, 0);
  c.theta = Vector::Unit(400, 0);
  c.repetitions = 500;
  c.seed = SeedSpec{6006, {}};
  const QuadformReport r = run_quadform_case(c);

  // Limits: (1-c)^{-3} = 8 and (1-c)^{-1} = 2 at c = 0.5.
  const bool sandwich_ok = r.sandwich_raw.abs_deviation <= 0.05 * 8.0 &&
                           r.sandwich_centered.abs_deviation <= 0.05 * 8.0;
  const bool single_ok = r.single_raw.abs_deviation <= 0.05 * 2.0 &&
                         r.single_centered.abs_deviation <= 0.05 * 2.0;
  const double sandwich_gap =
      std::abs(r.sandwich_centered.mc_mean - r.sandwich_raw.mc_mean) / r.sandwich_raw.mc_mean;
  const double single_gap =
      std::abs(r.single_centered.mc_mean - r.single_raw.mc_mean) / r.single_raw.mc_mean;
  const bool variants_ok = sandwich_gap <= 0.02 && single_gap <= 0.02;

  report(6, "lemma quadratic forms at p=400, n=m=800", sandwich_ok && single_ok && variants_ok,
         "sandwich mean " + fmt(r.sandwich_raw.mc_mean) + " (limit 8), single mean " +
             fmt(r.single_raw.mc_mean) + " (limit 2), centered-vs-raw gaps " + fmt(sandwich_gap) +
             "/" + fmt(single_gap));
}

// --------------------------------------------------------------------------
// 7. Small-scale oracle equivalences
// --------------------------------------------------------------------------
void criterion_7() {
  bool ok = true;
  std::string detail = "all oracles agree to 1e-12";
  RngStream rng(SeedSpec{7007, {}});

  // Sample covariance vs brute force, p, T <= 8.
  for (int rep = 0; rep < 50 && ok; ++rep) {
    const Index p = 2 + static_cast<Index>(rng.uniform01() * 7);
    const Index t = 2 + static_cast<Index>(rng.uniform01() * 7);
    Matrix panel(p, t);
    for (Index j = 0; j < t; ++j)
      for (Index i = 0; i < p; ++i) panel(i, j) = rng.uniform(-1.0, 1.0);
    Vector mean = Vector::Zero(p);
    for (Index k = 0; k < t; ++k) mean += panel.col(k);
    mean /= static_cast<double>(t);
    Matrix brute = Matrix::Zero(p, p);
    for (Index i = 0; i < p; ++i)
      for (Index j = 0; j < p; ++j) {
        double acc = 0.0;
        for (Index k = 0; k < t; ++k)
          acc += (panel(i, k) - mean[i]) * (panel(j, k) - mean[j]);
        brute(i, j) = acc / static_cast<double>(t - 1);
      }
    if ((sample_covariance_of(panel) - brute).cwiseAbs().maxCoeff() >= 1e-12) {
      ok = false;
      detail = "sample covariance disagrees with the brute-force definition";
    }
  }

  // VAR(1) closed form vs the Kronecker-vec solve, p <= 4.
  for (Index p : {2, 3, 4}) {
    const CovarianceEstimate sigma = random_covariance(p, SeedSpec{7008, {std::uint64_t(p)}});
    const VarParams var = random_var_params(p, SeedSpec{7009, {std::uint64_t(p)}});
    const Matrix closed = var1_unconditional_covariance(var, sigma).matrix;
    const Matrix gamma = var.gamma.asDiagonal();
    const Matrix system =
        Matrix::Identity(p * p, p * p) - Eigen::kroneckerProduct(gamma, gamma);
    const Vector vec_sigma = Eigen::Map<const Vector>(sigma.matrix.data(), p * p);
    const Vector vec_v = system.partialPivLu().solve(vec_sigma);
    const Matrix brute = Eigen::Map<const Matrix>(vec_v.data(), p, p);
    if ((closed - brute).cwiseAbs().maxCoeff() >= 1e-12) {
      ok = false;
      detail = "var1 unconditional covariance disagrees with the Kronecker solve";
    }
  }

  // Hand-solved 2x2 GMV cases.
  {
    const CovarianceEstimate diag21(Matrix(Eigen::Vector2d{2.0, 1.0}.asDiagonal()), 2,
                                    CovarianceKind::population);
    const Vector w = gmv_weights(diag21).weights;
    if (std::abs(w[0] - 1.0 / 3.0) >= 1e-12 || std::abs(w[1] - 2.0 / 3.0) >= 1e-12 ||
        std::abs(gmv_variance(diag21) - 2.0 / 3.0) >= 1e-12) {
      ok = false;
      detail = "2x2 GMV hand case failed";
    }
    Matrix general(2, 2);
    general << 2.0, 0.5, 0.5, 1.0;  // A^{-1} 1 = (0.25, 0.75) / det..., solved by hand:
    // solve A x = 1: x = (1/det) * (1*1 - 0.5*1, 2*1 - 0.5*1) = (0.5, 1.5) / 1.75.
    const CovarianceEstimate gen_cov(general, 2, CovarianceKind::population);
    const Vector wg = gmv_weights(gen_cov).weights;
    if (std::abs(wg[0] - 0.25) >= 1e-12 || std::abs(wg[1] - 0.75) >= 1e-12 ||
        std::abs(gmv_variance(gen_cov) - 1.75 / 2.0) >= 1e-12) {
      ok = false;
      detail = "general 2x2 GMV hand case failed";
    }
  }

  // FM/BPS intensities vs hand arithmetic (product of quadratic forms = 3).
  {
    const double fm = fm_intensity_from(WindowQuadforms{5.0, 0.6}, 5, 10).value;
    const double bps = bps_intensity_from(WindowQuadforms{5.0, 0.6}, 5, 10).value;
    if (std::abs(fm - 6.0 / 7.0) >= 1e-12 || std::abs(bps - 1.0 / 3.0) >= 1e-12) {
      ok = false;
      detail = "intensity hand arithmetic failed";
    }
    const double fm2 = fm_intensity_from(WindowQuadforms{4.0, 0.5}, 4, 1000).value;
    if (std::abs(fm2 - (1.0 - 1.0 / 998.0)) >= 1e-12) {
      ok = false;
      detail = "fm intensity p=4, n=1000 hand case failed";
    }
  }
  report(7, "small-scale oracle equivalences", ok, detail);
}

// --------------------------------------------------------------------------
// 8. Determinism across thread counts and reruns
// --------------------------------------------------------------------------
void criterion_8() {
  SimulationConfig config;
  config.scenario = Scenario::t5;
  config.n_grid = {80};
  config.c_grid = {0.5};
  config.c_tilde_grid = {0.5};
  config.repetitions = 8;
  config.master_seed = 8008;
  config.seed_set = true;

  config.threads = 1;
  const std::string csv1 = cells_csv(run_study(config));
  config.threads = 4;
  const std::string csv4 = cells_csv(run_study(config));
  const bool simulate_ok = csv1 == csv4;

  // Backtest on a deterministic fixture, run twice.
  const SeedSpec master{8009, {}};
  const CellModel model = make_cell_model(Scenario::t5, 6, cell_seed(master, 0));
  const ReturnsWindow panel = simulate_path(model, 90, repetition_seed(master, 0, 0));
  ReturnsDataset ds;
  ds.returns = panel.values;
  ds.dates = detail::synthetic_dates(90);
  for (Index j = 0; j < 6; ++j) ds.asset_ids.push_back("A" + std::to_string(j));
  BacktestConfig cfg;
  cfg.window_n = 30;
  cfg.window_m = 20;
  cfg.step = 5;
  const std::string bt1 = backtest_csv(run_backtest(ds, cfg));
  const std::string bt2 = backtest_csv(run_backtest(ds, cfg));
  const bool backtest_ok = bt1 == bt2 && !bt1.empty();

  report(8, "byte-identical outputs across reruns and thread counts", simulate_ok && backtest_ok,
         std::string("simulate 1 vs 4 threads ") + (simulate_ok ? "identical" : "DIFFER") +
             ", backtest reruns " + (backtest_ok ? "identical" : "DIFFER"));
}

// --------------------------------------------------------------------------
// 9. Backtest protocol on a scenario-1 fixture, p=100, n=m=200
// --------------------------------------------------------------------------
void criterion_9() {
  const Index p = 100, n = 200, m = 200, t_len = 2800;
  const SeedSpec master{9009, {}};
  const CellModel model = make_cell_model(Scenario::t5, p, cell_seed(master, 0));
  const ReturnsWindow panel = simulate_path(model, t_len, repetition_seed(master, 0, 0));
  ReturnsDataset ds;
  ds.returns = panel.values;
  ds.dates = detail::synthetic_dates(t_len);
  for (Index j = 0; j < p; ++j) ds.asset_ids.push_back("A" + std::to_string(j));

  BacktestConfig cfg;
  cfg.window_n = n;
  cfg.window_m = m;
  cfg.step = 200;
  const BacktestSeries series = run_backtest(ds, cfg);

  // Independent quadratic-form recomputation for the equal-weight records.
  const Vector b = Vector::Constant(p, 1.0 / p);
  bool target_ok = true;
  Index window = 0;
  double loss_sum = 0.0;
  Index loss_count = 0;
  for (const BacktestRecord& rec : series.records) {
    if (rec.strategy == Strategy::target) {
      const Index t = window * cfg.step;
      const Matrix s_out = sample_covariance_of(ds.returns.middleCols(t + n, m));
      if (std::abs(rec.empirical_oos_variance - b.dot(s_out * b)) >= 1e-12) target_ok = false;
      ++window;
    }
    if (rec.strategy == Strategy::traditional && rec.empirical_oos_relative_loss) {
      loss_sum += *rec.empirical_oos_relative_loss;
      ++loss_count;
    }
  }
  const double mean_loss = loss_sum / static_cast<double>(loss_count);
  const bool loss_ok = loss_count > 0 && std::abs(mean_loss - 1.0) <= 0.25;

  report(9, "backtest protocol: per-window target identity and traditional loss near 1",
         target_ok && loss_ok,
         std::to_string(window) + " windows, target identity " +
             (target_ok ? "exact" : "VIOLATED") + ", mean traditional loss " + fmt(mean_loss) +
             " (target 1.0 +/- 25%)");
}

}  // namespace

int main() {
  criterion_1();
  criteria_2_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion/criteria FAILED\n", failures);
  return 1;
}
