#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "hdgmv/datagen.hpp"
#include "hdgmv/detail/parallel.hpp"
#include "hdgmv/estimators.hpp"
#include "hdgmv/limits.hpp"
#include "hdgmv/portfolio.hpp"
#include "test_helpers.hpp"

using namespace hdgmv;

TEST_CASE("bps intensity concentrates at its limit under scenario 1") {
  // p/n = 0.5 at n = 1000; the sample mean over 200 repetitions lands within
  // 0.05 of (1-c) L_b / (c + (1-c) L_b) evaluated at the true target loss.
  const Index p = 500, n = 1000;
  const CovarianceEstimate sigma = random_covariance(p, testing::seed(3001));
  ModelParams params = make_model_params(MeanVector(random_mean(p, testing::seed(3002)).values),
                                         sigma);
  const PortfolioWeights b = equally_weighted_target(p);
  const double l_b = target_relative_loss(b, sigma);
  const double limit = limit_alpha_bps(0.5, l_b);

  const int reps = 200;
  std::vector<double> alphas(reps);
  detail::parallel_for_index(reps, 0, [&](std::int64_t i) {
    const ReturnsWindow window =
        simulate_scenario1(params, n, testing::seed(3003, static_cast<std::uint64_t>(i)));
    const CovarianceEstimate s = sample_covariance(window);
    const SpdSolver solver(s.matrix, "bps concentration test");
    alphas[static_cast<std::size_t>(i)] =
        bps_intensity_from(window_quadforms(solver, s, b), p, n).value;
  });

  double mean = 0.0;
  for (double a : alphas) mean += a;
  mean /= reps;
  CHECK(std::abs(mean - limit) < 0.05);
}
