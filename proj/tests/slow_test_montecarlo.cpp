#include <catch2/catch_amalgamated.hpp>

#include <chrono>

#include "hdgmv/backtest.hpp"
#include "hdgmv/detail/dates.hpp"
#include "hdgmv/montecarlo.hpp"
#include "test_helpers.hpp"

using namespace hdgmv;

TEST_CASE("empirical and true losses share their limits at n=1000") {
  // The empirical measures share their limits with the population ones;
  // at n=1000 (c = c~ = 0.5) the two sample means agree
  // within 0.05 for every strategy, and the loss ordering holds.
  SimulationConfig config;
  config.scenario = Scenario::t5;
  config.n_grid = {1000};
  config.c_grid = {0.5};
  config.c_tilde_grid = {0.5};
  config.repetitions = 200;
  config.master_seed = 5005;
  config.seed_set = true;
  config.threads = 0;
  const CellResult cell = run_cell(config, enumerate_cells(config)[0]);
  REQUIRE(cell.ok());

  for (std::size_t k = 0; k < 4; ++k)
    CHECK(std::abs(cell.mean_empirical_loss[k] - cell.mean_true_loss[k]) < 0.05);

  CHECK(cell.mean_empirical_loss[2] <= cell.mean_empirical_loss[1]);
  CHECK(cell.mean_empirical_loss[1] <= cell.mean_empirical_loss[0]);
  CHECK(cell.ordering_fraction >= 0.90);
}

TEST_CASE("two-cell smoke study stays within the desk-scale budget") {
  SimulationConfig config;
  config.scenario = Scenario::t5;
  config.n_grid = {60, 100};
  config.c_grid = {0.5};
  config.c_tilde_grid = {0.5};
  config.repetitions = 100;
  config.master_seed = 6006;
  config.seed_set = true;
  config.threads = 0;

  const auto start = std::chrono::steady_clock::now();
  const StudyResult study = run_study(config);
  const auto elapsed =
      std::chrono::duration_cast<std::chrono::seconds>(std::chrono::steady_clock::now() - start);

  REQUIRE(study.cells.size() == 2);
  for (const CellResult& cell : study.cells) CHECK(cell.ok());
  CHECK(elapsed.count() < 60);  // documented desk-scale budget for the CI config
}

TEST_CASE("backtest on simulated data preserves the loss ordering") {
  // Loss-ordering at finite sample: over rolling windows of a
  // scenario-1 panel, bps <= fm <= traditional holds in >= 80% of windows.
  const Index p = 100, n = 200, m = 200;
  const SeedSpec master{7007, {}};
  const CellModel model = make_cell_model(Scenario::t5, p, cell_seed(master, 0));
  const ReturnsWindow panel = simulate_path(model, 2000, repetition_seed(master, 0, 0));
  ReturnsDataset ds;
  ds.returns = panel.values;
  ds.dates = detail::synthetic_dates(panel.length());
  for (Index j = 0; j < p; ++j) ds.asset_ids.push_back("A" + std::to_string(j));

  BacktestConfig cfg;
  cfg.window_n = n;
  cfg.window_m = m;
  cfg.step = 100;
  const BacktestSeries series = run_backtest(ds, cfg);
  const BacktestSummary summary = summarize(series);
  CHECK(summary.ordering_fraction >= 0.8);
}
