#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hdgmv/csv.hpp"
#include "hdgmv/detail/format.hpp"
#include "hdgmv/estimators.hpp"
#include "hdgmv/moments.hpp"
#include "hdgmv/rng.hpp"
#include "hdgmv/types.hpp"

// Rolling-window protocol: estimate the four strategies on a trailing window
// of n observations, evaluate the empirical out-of-sample variance and
// relative loss on the next m observations, step forward, repeat. Successive
// evaluation windows overlap when the stride is below m; records are reported
// independently, with no overlap correction.

namespace hdgmv {

struct BacktestConfig {
  Index window_n = 200;
  Index window_m = 200;
  Index step = 1;
  std::optional<Index> asset_count;   // random subset drawn once per run
  std::uint64_t selection_seed = 0;

  void validate_for(const ReturnsDataset& ds) const {
    if (window_n < 2 || window_m < 2 || step < 1)
      throw ConfigError("backtest config: need window_n, window_m >= 2 and step >= 1");
    if (window_n + window_m > ds.length())
      throw ConfigError("backtest config: window_n + window_m = " +
                        std::to_string(window_n + window_m) + " exceeds T = " +
                        std::to_string(ds.length()));
  }
};

struct BacktestRecord {
  std::string date_end;  // last date of the evaluation window
  Strategy strategy;
  double empirical_oos_variance;
  std::optional<double> empirical_oos_relative_loss;
};

struct BacktestSeries {
  std::vector<BacktestRecord> records;      // chronological, strategy-major within window
  std::vector<std::string> diagnostics;     // skipped windows / rejected losses
};

// Uniform random subset of `count` assets, drawn once, source order preserved.
inline ReturnsDataset select_assets(const ReturnsDataset& ds, Index count, const SeedSpec& seed) {
  const Index p = ds.asset_count();
  if (count < 1 || count > p)
    throw ConfigError("select_assets: count " + std::to_string(count) + " out of range [1, " +
                      std::to_string(p) + "]");
  std::vector<Index> indices(static_cast<std::size_t>(p));
  std::iota(indices.begin(), indices.end(), Index{0});
  RngStream rng(seed);
  // Partial Fisher-Yates: after `count` swaps the prefix is the sample.
  for (Index i = 0; i < count; ++i) {
    const Index j = i + static_cast<Index>(rng.uniform01() * static_cast<double>(p - i));
    std::swap(indices[static_cast<std::size_t>(i)], indices[static_cast<std::size_t>(j)]);
  }
  indices.resize(static_cast<std::size_t>(count));
  std::sort(indices.begin(), indices.end());

  ReturnsDataset out;
  out.dates = ds.dates;
  out.returns.resize(count, ds.length());
  out.asset_ids.reserve(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) {
    out.asset_ids.push_back(ds.asset_ids[static_cast<std::size_t>(indices[static_cast<std::size_t>(i)])]);
    out.returns.row(i) = ds.returns.row(indices[static_cast<std::size_t>(i)]);
  }
  return out;
}

inline BacktestSeries run_backtest(const ReturnsDataset& ds, const BacktestConfig& cfg) {
  cfg.validate_for(ds);
  const Index p = ds.asset_count();
  const Index n = cfg.window_n;
  const Index m = cfg.window_m;
  const PortfolioWeights target = equally_weighted_target(p);
  const double correction = 1.0 - static_cast<double>(p) / static_cast<double>(m);

  BacktestSeries series;
  for (Index t = 0; t + n + m <= ds.length(); t += cfg.step) {
    const std::string& date_end = ds.dates[static_cast<std::size_t>(t + n + m - 1)];

    // Estimation may fail on a degenerate window; the target weights are
    // always available, so its variance record survives.
    std::vector<const PortfolioWeights*> weights;
    std::optional<StrategyEstimates> estimates;
    try {
      estimates = estimate_all(ReturnsWindow(ds.returns.middleCols(t, n)), target);
      weights = {&estimates->traditional, &estimates->fm, &estimates->bps, &estimates->target};
    } catch (const Error& e) {
      series.diagnostics.push_back("window ending " + date_end +
                                   ": estimation skipped: " + e.what());
      weights = {&target};
    }

    const Matrix s_out = sample_covariance_of(ds.returns.middleCols(t + n, m));
    std::optional<double> ones_qf_out;
    if (m > p) {
      try {
        const SpdSolver solver(s_out, "evaluation window ending " + date_end +
                                          " (p=" + std::to_string(p) + ", m=" + std::to_string(m) + ")");
        const Vector ones = Vector::Ones(p);
        ones_qf_out = ones.dot(solver.solve(ones));
      } catch (const SingularMatrixError& e) {
        series.diagnostics.push_back("window ending " + date_end +
                                     ": loss rejected: " + e.what());
      }
    } else {
      series.diagnostics.push_back("window ending " + date_end + ": loss rejected: m=" +
                                   std::to_string(m) + " <= p=" + std::to_string(p));
    }

    for (const PortfolioWeights* w : weights) {
      BacktestRecord rec;
      rec.date_end = date_end;
      rec.strategy = w->strategy;
      rec.empirical_oos_variance = w->weights.dot(s_out * w->weights);
      if (ones_qf_out)
        rec.empirical_oos_relative_loss = correction * *ones_qf_out * rec.empirical_oos_variance - 1.0;
      series.records.push_back(std::move(rec));
    }
  }
  return series;
}

struct StrategySummary {
  Strategy strategy;
  Index window_count = 0;
  double mean_variance = 0.0;
  double median_variance = 0.0;
  double mean_loss = 0.0;
  double median_loss = 0.0;
  Index loss_count = 0;
};

struct BacktestSummary {
  std::vector<StrategySummary> per_strategy;
  double ordering_fraction = 0.0;  // share of windows with bps <= fm <= s loss
};

namespace detail {

inline double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace detail

inline BacktestSummary summarize(const BacktestSeries& series) {
  if (series.records.empty()) throw ConfigError("summarize: empty backtest series");
  BacktestSummary summary;
  for (Strategy s : {Strategy::traditional, Strategy::fm_shrinkage, Strategy::bps_shrinkage,
                     Strategy::target}) {
    std::vector<double> variances, losses;
    for (const BacktestRecord& rec : series.records) {
      if (rec.strategy != s) continue;
      variances.push_back(rec.empirical_oos_variance);
      if (rec.empirical_oos_relative_loss) losses.push_back(*rec.empirical_oos_relative_loss);
    }
    if (variances.empty()) continue;
    StrategySummary ss;
    ss.strategy = s;
    ss.window_count = static_cast<Index>(variances.size());
    ss.mean_variance =
        std::accumulate(variances.begin(), variances.end(), 0.0) / static_cast<double>(variances.size());
    ss.median_variance = detail::median_of(variances);
    ss.loss_count = static_cast<Index>(losses.size());
    if (!losses.empty()) {
      ss.mean_loss =
          std::accumulate(losses.begin(), losses.end(), 0.0) / static_cast<double>(losses.size());
      ss.median_loss = detail::median_of(losses);
    }
    summary.per_strategy.push_back(ss);
  }

  // Ordering check over windows where all three estimator losses exist.
  Index ordered = 0, comparable = 0;
  std::size_t i = 0;
  while (i < series.records.size()) {
    const std::string& date = series.records[i].date_end;
    std::optional<double> ls, lfm, lbps;
    std::size_t j = i;
    for (; j < series.records.size() && series.records[j].date_end == date; ++j) {
      const BacktestRecord& rec = series.records[j];
      if (!rec.empirical_oos_relative_loss) continue;
      if (rec.strategy == Strategy::traditional) ls = rec.empirical_oos_relative_loss;
      if (rec.strategy == Strategy::fm_shrinkage) lfm = rec.empirical_oos_relative_loss;
      if (rec.strategy == Strategy::bps_shrinkage) lbps = rec.empirical_oos_relative_loss;
    }
    if (ls && lfm && lbps) {
      ++comparable;
      if (*lbps <= *lfm && *lfm <= *ls) ++ordered;
    }
    i = j;
  }
  if (comparable > 0)
    summary.ordering_fraction = static_cast<double>(ordered) / static_cast<double>(comparable);
  return summary;
}

inline std::string backtest_csv(const BacktestSeries& series, const std::string& comment = "") {
  std::ostringstream out;
  if (!comment.empty()) out << "# " << comment << "\n";
  out << "date_end,strategy,emp_oos_variance,emp_oos_relative_loss\n";
  for (const BacktestRecord& rec : series.records) {
    out << rec.date_end << ',' << strategy_name(rec.strategy) << ','
        << detail::format_double(rec.empirical_oos_variance) << ',';
    if (rec.empirical_oos_relative_loss)
      out << detail::format_double(*rec.empirical_oos_relative_loss);
    out << "\n";
  }
  return out.str();
}

}  // namespace hdgmv
