#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hdgmv/detail/format.hpp"
#include "hdgmv/errors.hpp"
#include "hdgmv/montecarlo.hpp"
#include "hdgmv/quadform.hpp"

// Serialization of study and lemma-verification results. Every output embeds
// the effective configuration (including the master seed), so a rerun from
// the embedded config reproduces the file byte for byte.

namespace hdgmv {

inline nlohmann::json config_to_json(const SimulationConfig& config) {
  return nlohmann::json{{"scenario", scenario_name(config.scenario)},
                        {"n_grid", config.n_grid},
                        {"c_grid", config.c_grid},
                        {"c_tilde_grid", config.c_tilde_grid},
                        {"repetitions", config.repetitions},
                        {"master_seed", config.master_seed},
                        {"tolerance_overrides", config.tolerance_overrides}};
}

inline SimulationConfig config_from_json(const nlohmann::json& j) {
  SimulationConfig config;
  config.scenario = parse_scenario(j.at("scenario").get<std::string>());
  config.n_grid = j.at("n_grid").get<std::vector<Index>>();
  config.c_grid = j.at("c_grid").get<std::vector<double>>();
  config.c_tilde_grid = j.at("c_tilde_grid").get<std::vector<double>>();
  config.repetitions = j.at("repetitions").get<int>();
  if (!j.contains("master_seed")) throw ConfigError("config: master_seed is required");
  config.master_seed = j.at("master_seed").get<std::uint64_t>();
  config.seed_set = true;
  if (j.contains("tolerance_overrides"))
    config.tolerance_overrides = j.at("tolerance_overrides").get<std::map<std::string, double>>();
  return config;
}

// One row per cell; `# config ...` comment line carries provenance.
inline std::string cells_csv(const StudyResult& study) {
  using detail::format_double;
  std::ostringstream out;
  out << "# config " << config_to_json(study.config).dump() << "\n";
  out << "scenario,n,p,m,c,c_tilde,repetitions,"
         "mean_emp_loss_s,mean_emp_loss_fm,mean_emp_loss_bps,mean_emp_loss_target,"
         "se_emp_loss_s,se_emp_loss_fm,se_emp_loss_bps,se_emp_loss_target,"
         "mean_true_loss_s,mean_true_loss_fm,mean_true_loss_bps,mean_true_loss_target,"
         "diff_s_fm,diff_s_bps,diff_fm_bps,"
         "se_diff_s_fm,se_diff_s_bps,se_diff_fm_bps,"
         "limit_s_fm,limit_s_bps,limit_fm_bps,"
         "ratio_s_fm,ratio_s_bps,ratio_fm_bps,"
         "ordering_fraction,v_gmv_true,l_b_true,fm_alpha_outside_unit,status\n";
  for (const CellResult& cell : study.cells) {
    out << scenario_name(cell.spec.scenario) << ',' << cell.spec.n << ',' << cell.spec.p << ','
        << cell.spec.m << ',' << format_double(cell.spec.c) << ','
        << format_double(cell.spec.c_tilde) << ',' << cell.repetitions;
    for (double v : cell.mean_empirical_loss) out << ',' << format_double(v);
    for (double v : cell.se_empirical_loss) out << ',' << format_double(v);
    for (double v : cell.mean_true_loss) out << ',' << format_double(v);
    for (double v : cell.difference) out << ',' << format_double(v);
    for (double v : cell.difference_se) out << ',' << format_double(v);
    for (double v : cell.difference_limit) out << ',' << format_double(v);
    for (double v : cell.ratio_to_limit) out << ',' << format_double(v);
    out << ',' << format_double(cell.ordering_fraction) << ',' << format_double(cell.v_gmv_true)
        << ',' << format_double(cell.l_b_true) << ',' << cell.fm_alpha_outside_unit << ','
        << (cell.ok() ? "ok" : cell.error) << "\n";
  }
  return out.str();
}

inline nlohmann::json cell_to_json(const CellResult& cell) {
  nlohmann::json j{{"id", cell.spec.id()},
                   {"scenario", scenario_name(cell.spec.scenario)},
                   {"n", cell.spec.n},
                   {"p", cell.spec.p},
                   {"m", cell.spec.m},
                   {"c", cell.spec.c},
                   {"c_tilde", cell.spec.c_tilde},
                   {"repetitions", cell.repetitions},
                   {"status", cell.ok() ? "ok" : cell.error}};
  if (!cell.ok()) return j;
  const char* strategies[] = {"s", "fm", "bps", "target"};
  for (int k = 0; k < 4; ++k) {
    j["mean_emp_loss"][strategies[k]] = cell.mean_empirical_loss[k];
    j["se_emp_loss"][strategies[k]] = cell.se_empirical_loss[k];
    j["mean_true_loss"][strategies[k]] = cell.mean_true_loss[k];
    j["mean_emp_variance"][strategies[k]] = cell.mean_empirical_variance[k];
  }
  const char* pairs[] = {"s_fm", "s_bps", "fm_bps"};
  for (int d = 0; d < 3; ++d) {
    j["difference"][pairs[d]] = cell.difference[d];
    j["difference_se"][pairs[d]] = cell.difference_se[d];
    j["difference_limit"][pairs[d]] = cell.difference_limit[d];
    j["ratio_to_limit"][pairs[d]] = cell.ratio_to_limit[d];
  }
  j["ordering_fraction"] = cell.ordering_fraction;
  j["v_gmv_true"] = cell.v_gmv_true;
  j["l_b_true"] = cell.l_b_true;
  j["fm_alpha_outside_unit"] = cell.fm_alpha_outside_unit;
  return j;
}

inline nlohmann::json study_report_json(const StudyResult& study) {
  nlohmann::json cells = nlohmann::json::array();
  for (const CellResult& cell : study.cells) cells.push_back(cell_to_json(cell));
  return nlohmann::json{{"config", config_to_json(study.config)}, {"cells", cells}};
}

inline nlohmann::json quadform_stats_json(const QuadformStats& s) {
  return nlohmann::json{{"limit", s.limit},
                        {"mc_mean", s.mc_mean},
                        {"std_error", s.std_error},
                        {"abs_deviation", s.abs_deviation}};
}

inline nlohmann::json quadform_report_json(const QuadformCase& c, const QuadformReport& r,
                                           double sandwich_tol, double single_tol,
                                           double variant_tol) {
  const auto rel = [](const QuadformStats& s) {
    return s.limit == 0.0 ? s.abs_deviation : s.abs_deviation / std::abs(s.limit);
  };
  const double variant_gap =
      std::abs(r.sandwich_centered.mc_mean - r.sandwich_raw.mc_mean) /
      std::max(std::abs(r.sandwich_raw.mc_mean), 1e-300);
  const bool pass = rel(r.sandwich_raw) <= sandwich_tol && rel(r.sandwich_centered) <= sandwich_tol &&
                    rel(r.single_raw) <= single_tol && rel(r.single_centered) <= single_tol &&
                    variant_gap <= variant_tol;
  return nlohmann::json{
      {"case",
       {{"p", c.p},
        {"n", c.n},
        {"m", c.m},
        {"repetitions", c.repetitions},
        {"master_seed", c.seed.master_seed},
        {"xi_dot_theta", c.xi.dot(c.theta)}}},
      {"tolerances",
       {{"sandwich_rel", sandwich_tol}, {"single_rel", single_tol}, {"variant_rel", variant_tol}}},
      {"sandwich_raw", quadform_stats_json(r.sandwich_raw)},
      {"sandwich_centered", quadform_stats_json(r.sandwich_centered)},
      {"single_raw", quadform_stats_json(r.single_raw)},
      {"single_centered", quadform_stats_json(r.single_centered)},
      {"cross_mean", quadform_stats_json(r.cross_mean)},
      {"centered_vs_raw_rel_gap", variant_gap},
      {"pass", pass}};
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

}  // namespace hdgmv
