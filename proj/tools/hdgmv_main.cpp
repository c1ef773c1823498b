// Command-line front end: `limits`, `gen-data`, `simulate`, `verify-lemmas`,
// and `backtest`. All randomness flows from an explicit seed; every output
// file embeds the effective configuration so reruns reproduce it byte for
// byte. Exit codes: 0 success, 1 invalid usage/config/input, 2 numerical
// failure during a run.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hdgmv/detail/dates.hpp"
#include "hdgmv/detail/format.hpp"
#include "hdgmv/hdgmv.hpp"
#include "hdgmv/report_io.hpp"

namespace {

using nlohmann::json;

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
  } else {
    hdgmv::write_text_file(out_path, content);
  }
}

// ---------------------------------------------------------------------------
// limits: closed-form limit table over a (c, l_b) grid
// ---------------------------------------------------------------------------

int run_limits(const std::vector<double>& c_grid, const std::vector<double>& lb_grid,
               const std::string& out_path) {
  using hdgmv::detail::format_double;
  json config{{"subcommand", "limits"}, {"c_grid", c_grid}, {"lb_grid", lb_grid}};
  std::ostringstream out;
  out << "# config " << config.dump() << "\n";
  out << "c,l_b,alpha_fm,alpha_bps,loss_traditional,loss_fm,loss_bps,loss_target,"
         "diff_s_fm,diff_s_bps,diff_fm_bps\n";
  for (double c : c_grid) {
    for (double lb : lb_grid) {
      hdgmv::AsymptoticInputs in;
      in.c = c;
      in.v_gmv = 1.0;
      in.l_b = lb;
      out << format_double(c) << ',' << format_double(lb) << ','
          << format_double(hdgmv::limit_alpha_fm(c, lb)) << ','
          << format_double(hdgmv::limit_alpha_bps(c, lb)) << ','
          << format_double(hdgmv::limit_oos_loss(hdgmv::Strategy::traditional, in)) << ','
          << format_double(hdgmv::limit_oos_loss(hdgmv::Strategy::fm_shrinkage, in)) << ','
          << format_double(hdgmv::limit_oos_loss(hdgmv::Strategy::bps_shrinkage, in)) << ','
          << format_double(hdgmv::limit_oos_loss(hdgmv::Strategy::target, in)) << ','
          << format_double(
                 hdgmv::limit_loss_difference(hdgmv::DifferencePair::s_minus_fm, c, lb))
          << ','
          << format_double(
                 hdgmv::limit_loss_difference(hdgmv::DifferencePair::s_minus_bps, c, lb))
          << ','
          << format_double(
                 hdgmv::limit_loss_difference(hdgmv::DifferencePair::fm_minus_bps, c, lb))
          << "\n";
    }
  }
  emit(out_path, out.str());
  return 0;
}

// ---------------------------------------------------------------------------
// gen-data: synthetic returns fixture + parameter sidecar
// ---------------------------------------------------------------------------

json matrix_to_json(const hdgmv::Matrix& m) {
  json rows = json::array();
  for (hdgmv::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (hdgmv::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const hdgmv::Vector& v) {
  json out = json::array();
  for (hdgmv::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

int run_gen_data(const std::string& scenario_name, hdgmv::Index p, hdgmv::Index t_len,
                 std::uint64_t seed, const std::string& out_dir) {
  namespace fs = std::filesystem;
  const hdgmv::Scenario scenario = hdgmv::parse_scenario(scenario_name);
  if (p < 2 || t_len < 2) throw hdgmv::ConfigError("gen-data: need --p >= 2 and --t >= 2");

  const hdgmv::SeedSpec master{seed, {}};
  const hdgmv::CellModel model = hdgmv::make_cell_model(scenario, p, hdgmv::cell_seed(master, 0));
  const hdgmv::ReturnsWindow panel =
      hdgmv::simulate_path(model, t_len, hdgmv::repetition_seed(master, 0, 0));

  hdgmv::ReturnsDataset ds;
  ds.dates = hdgmv::detail::synthetic_dates(t_len);
  ds.returns = panel.values;
  for (hdgmv::Index j = 0; j < p; ++j) {
    char id[24];
    std::snprintf(id, sizeof(id), "A%04lld", static_cast<long long>(j + 1));
    ds.asset_ids.emplace_back(id);
  }

  json config{{"subcommand", "gen-data"},
              {"scenario", scenario_name},
              {"p", p},
              {"t", t_len},
              {"master_seed", seed}};
  json params{{"config", config},
              {"mu", vector_to_json(model.params.mu.values)},
              {"sigma", matrix_to_json(model.params.sigma.matrix)},
              {"unconditional_covariance", matrix_to_json(model.unconditional.matrix)},
              {"v_gmv_true", model.v_gmv_true},
              {"l_b_true", model.l_b_true},
              {"start_date", ds.dates.front()}};
  if (model.var1) params["gamma"] = vector_to_json(model.var1->var.gamma);
  if (model.garch) {
    params["garch"] = {{"alpha0", vector_to_json(model.garch->garch.alpha0)},
                       {"alpha1", vector_to_json(model.garch->garch.alpha1)},
                       {"beta1", vector_to_json(model.garch->garch.beta1)}};
  }

  fs::create_directories(out_dir);
  hdgmv::write_text_file((fs::path(out_dir) / "returns.csv").string(),
                         hdgmv::returns_csv(ds, "config " + config.dump()));
  hdgmv::write_text_file((fs::path(out_dir) / "params.json").string(), params.dump(2) + "\n");
  std::cout << "wrote " << (fs::path(out_dir) / "returns.csv").string() << " ("
            << p << " assets x " << t_len << " observations)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// simulate: the Monte Carlo study
// ---------------------------------------------------------------------------

int run_simulate(const hdgmv::SimulationConfig& config, const std::string& out_dir) {
  namespace fs = std::filesystem;
  const hdgmv::StudyResult study = hdgmv::run_study(config);
  fs::create_directories(out_dir);
  hdgmv::write_text_file((fs::path(out_dir) / "cells.csv").string(), hdgmv::cells_csv(study));
  hdgmv::write_text_file((fs::path(out_dir) / "report.json").string(),
                         hdgmv::study_report_json(study).dump(2) + "\n");
  int failed = 0;
  for (const auto& cell : study.cells)
    if (!cell.ok()) {
      ++failed;
      std::cerr << "cell " << cell.spec.id() << ": " << cell.error << "\n";
    }
  std::cout << "simulated " << study.cells.size() << " cell(s), " << failed << " failed; results in "
            << out_dir << "\n";
  return failed == 0 ? 0 : 2;
}

// ---------------------------------------------------------------------------
// verify-lemmas: quadratic-form limit harness
// ---------------------------------------------------------------------------

int run_verify_lemmas(hdgmv::Index p, hdgmv::Index n, hdgmv::Index m, int reps, std::uint64_t seed,
                      double tol_sandwich, double tol_single, double tol_variant, int threads,
                      const std::string& out_path) {
  hdgmv::QuadformCase c;
  c.p = p;
  c.n = n;
  c.m = m;
  c.xi = hdgmv::Vector::Unit(p, 0);
  c.theta = hdgmv::Vector::Unit(p, 0);
  c.repetitions = reps;
  c.seed = hdgmv::SeedSpec{seed, {}};
  const hdgmv::QuadformReport report = hdgmv::run_quadform_case(c, threads);
  const json j = hdgmv::quadform_report_json(c, report, tol_sandwich, tol_single, tol_variant);
  emit(out_path, j.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// backtest: rolling-window evaluation of a returns panel
// ---------------------------------------------------------------------------

int run_backtest_cmd(const std::string& input, hdgmv::Index n, hdgmv::Index m, hdgmv::Index step,
                     hdgmv::Index assets, std::uint64_t seed, bool seed_given,
                     const std::string& out_dir) {
  namespace fs = std::filesystem;
  hdgmv::ReturnsDataset ds = hdgmv::load_returns_csv(input);

  json config{{"subcommand", "backtest"}, {"input", fs::path(input).filename().string()},
              {"n", n},  {"m", m},
              {"step", step}};
  if (assets > 0) {
    if (!seed_given)
      throw hdgmv::ConfigError("backtest: --seed is required when --assets selects a subset");
    ds = hdgmv::select_assets(ds, assets, hdgmv::SeedSpec{seed, {0}});
    config["assets"] = assets;
    config["selection_seed"] = seed;
  }

  hdgmv::BacktestConfig cfg;
  cfg.window_n = n;
  cfg.window_m = m;
  cfg.step = step;
  const hdgmv::BacktestSeries series = hdgmv::run_backtest(ds, cfg);
  const hdgmv::BacktestSummary summary = hdgmv::summarize(series);

  json summary_json{{"config", config}, {"ordering_fraction", summary.ordering_fraction}};
  for (const auto& s : summary.per_strategy) {
    summary_json["strategies"][hdgmv::strategy_name(s.strategy)] = {
        {"windows", s.window_count},     {"mean_variance", s.mean_variance},
        {"median_variance", s.median_variance}, {"mean_loss", s.mean_loss},
        {"median_loss", s.median_loss},  {"loss_windows", s.loss_count}};
  }
  summary_json["diagnostics"] = series.diagnostics;

  fs::create_directories(out_dir);
  hdgmv::write_text_file((fs::path(out_dir) / "backtest.csv").string(),
                         hdgmv::backtest_csv(series, "config " + config.dump()));
  hdgmv::write_text_file((fs::path(out_dir) / "summary.json").string(),
                         summary_json.dump(2) + "\n");
  std::cout << "backtested " << ds.asset_count() << " assets over "
            << (summary.per_strategy.empty() ? 0 : summary.per_strategy.front().window_count)
            << " window(s); results in " << out_dir << "\n";
  for (const std::string& d : series.diagnostics) std::cerr << d << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"High-dimensional GMV portfolio estimators, their out-of-sample performance "
               "measures, and the tooling to verify the asymptotic limits"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  // limits
  auto* limits_cmd = app.add_subcommand("limits", "Emit the closed-form limit table over a (c, l_b) grid");
  std::vector<double> c_grid{0.5};
  std::vector<double> lb_grid{1.0};
  std::string limits_out;
  limits_cmd->add_option("--c", c_grid, "In-sample concentration grid values in (0,1)")
      ->delimiter(',');
  limits_cmd->add_option("--lb", lb_grid, "Target relative loss grid values >= 0")->delimiter(',');
  limits_cmd->add_option("--out", limits_out, "Output CSV path (default stdout)");

  // gen-data
  auto* gen_cmd = app.add_subcommand("gen-data", "Write a synthetic returns fixture + parameter sidecar");
  std::string gen_scenario = "t5";
  hdgmv::Index gen_p = 10, gen_t = 500;
  std::uint64_t gen_seed = 0;
  std::string gen_out = "gen-data-out";
  gen_cmd->add_option("--scenario", gen_scenario, "t5, var1, or ccc_garch");
  gen_cmd->add_option("--p", gen_p, "Number of assets");
  gen_cmd->add_option("--t", gen_t, "Number of observations");
  auto* gen_seed_opt = gen_cmd->add_option("--seed", gen_seed, "Master seed (required)");
  gen_cmd->add_option("--out", gen_out, "Output directory");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Run the Monte Carlo study over a cell grid");
  std::string sim_config_path;
  std::string sim_scenario = "t5";
  std::vector<hdgmv::Index> sim_n{100};
  std::vector<double> sim_c{0.5};
  std::vector<double> sim_ct{0.5};
  int sim_reps = 1000;
  std::uint64_t sim_seed = 0;
  int sim_threads = 0;
  std::string sim_out = "simulate-out";
  sim_cmd->add_option("--config", sim_config_path, "JSON config file (flags override it)");
  auto* sim_scn = sim_cmd->add_option("--scenario", sim_scenario, "t5, var1, or ccc_garch");
  auto* sim_n_opt = sim_cmd->add_option("--n", sim_n, "In-sample sizes")->delimiter(',');
  auto* sim_c_opt = sim_cmd->add_option("--c", sim_c, "Concentrations p/n in (0,1)")->delimiter(',');
  auto* sim_ct_opt =
      sim_cmd->add_option("--ctilde", sim_ct, "Concentrations p/m in (0,1)")->delimiter(',');
  auto* sim_reps_opt = sim_cmd->add_option("--reps", sim_reps, "Repetitions per cell");
  auto* sim_seed_opt = sim_cmd->add_option("--seed", sim_seed, "Master seed (required)");
  sim_cmd->add_option("--threads", sim_threads, "Worker threads (0 = hardware)");
  sim_cmd->add_option("--out", sim_out, "Output directory");

  // verify-lemmas
  auto* lem_cmd = app.add_subcommand("verify-lemmas", "Monte Carlo check of the quadratic-form limits");
  hdgmv::Index lem_p = 200, lem_n = 400, lem_m = 400;
  int lem_reps = 200;
  std::uint64_t lem_seed = 42;
  double lem_tol_sandwich = 0.05, lem_tol_single = 0.02, lem_tol_variant = 0.02;
  int lem_threads = 0;
  std::string lem_out;
  lem_cmd->add_option("--p", lem_p, "Dimension");
  lem_cmd->add_option("--n", lem_n, "In-sample size (n > p)");
  lem_cmd->add_option("--m", lem_m, "Out-of-sample size");
  lem_cmd->add_option("--reps", lem_reps, "Monte Carlo repetitions");
  lem_cmd->add_option("--seed", lem_seed, "Master seed");
  lem_cmd->add_option("--tol-sandwich", lem_tol_sandwich, "Relative tolerance, sandwich form");
  lem_cmd->add_option("--tol-single", lem_tol_single, "Relative tolerance, single form");
  lem_cmd->add_option("--tol-variant", lem_tol_variant, "Relative tolerance, centered vs raw");
  lem_cmd->add_option("--threads", lem_threads, "Worker threads (0 = hardware)");
  lem_cmd->add_option("--out", lem_out, "Output JSON path (default stdout)");

  // backtest
  auto* bt_cmd = app.add_subcommand("backtest", "Rolling-window evaluation of a returns CSV");
  std::string bt_input;
  hdgmv::Index bt_n = 200, bt_m = 200, bt_step = 1, bt_assets = 0;
  std::uint64_t bt_seed = 0;
  std::string bt_out = "backtest-out";
  bt_cmd->add_option("--input", bt_input, "Input returns CSV")->required();
  bt_cmd->add_option("--n", bt_n, "Estimation window length");
  bt_cmd->add_option("--m", bt_m, "Evaluation window length");
  bt_cmd->add_option("--step", bt_step, "Roll stride");
  bt_cmd->add_option("--assets", bt_assets, "Random asset subset size (0 = all)");
  auto* bt_seed_opt = bt_cmd->add_option("--seed", bt_seed, "Selection seed (required with --assets)");
  bt_cmd->add_option("--out", bt_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help/usage text
    return code == 0 ? 0 : 1;
  }

  try {
    if (limits_cmd->parsed()) return run_limits(c_grid, lb_grid, limits_out);

    if (gen_cmd->parsed()) {
      if (gen_seed_opt->count() == 0)
        throw hdgmv::ConfigError("gen-data: --seed is required (no wall-clock seeding)");
      return run_gen_data(gen_scenario, gen_p, gen_t, gen_seed, gen_out);
    }

    if (sim_cmd->parsed()) {
      hdgmv::SimulationConfig config;
      if (!sim_config_path.empty()) {
        std::ifstream in(sim_config_path);
        if (!in) throw hdgmv::ConfigError("simulate: cannot open config '" + sim_config_path + "'");
        json j;
        try {
          in >> j;
        } catch (const json::exception& e) {
          throw hdgmv::ConfigError("simulate: bad JSON in '" + sim_config_path + "': " + e.what());
        }
        config = hdgmv::config_from_json(j);
      }
      if (sim_scn->count() || sim_config_path.empty())
        config.scenario = hdgmv::parse_scenario(sim_scenario);
      if (sim_n_opt->count() || sim_config_path.empty()) config.n_grid = sim_n;
      if (sim_c_opt->count() || sim_config_path.empty()) config.c_grid = sim_c;
      if (sim_ct_opt->count() || sim_config_path.empty()) config.c_tilde_grid = sim_ct;
      if (sim_reps_opt->count() || sim_config_path.empty()) config.repetitions = sim_reps;
      if (sim_seed_opt->count()) {
        config.master_seed = sim_seed;
        config.seed_set = true;
      }
      config.threads = sim_threads;
      if (!config.seed_set)
        throw hdgmv::ConfigError("simulate: a master seed is required (no wall-clock seeding)");
      return run_simulate(config, sim_out);
    }

    if (lem_cmd->parsed())
      return run_verify_lemmas(lem_p, lem_n, lem_m, lem_reps, lem_seed, lem_tol_sandwich,
                               lem_tol_single, lem_tol_variant, lem_threads, lem_out);

    if (bt_cmd->parsed())
      return run_backtest_cmd(bt_input, bt_n, bt_m, bt_step, bt_assets, bt_seed,
                              bt_seed_opt->count() > 0, bt_out);
  } catch (const hdgmv::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const hdgmv::CsvFormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const hdgmv::Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
