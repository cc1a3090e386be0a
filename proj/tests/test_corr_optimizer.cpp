#include <cmath>

#include "doctest.h"
#include "wtcce/corr_optimizer.hpp"
#include "wtcce/errors.hpp"
#include "wtcce/gauss_oracle.hpp"
#include "wtcce/lcg.hpp"
#include "wtcce/scenario.hpp"

using namespace wtcce;

namespace {

RateObjective bowl(CorrelationTriple c) {
  return [c](const CorrelationTriple& r) -> std::optional<RateBreakdown> {
    const double d = (r.rho_1 - c.rho_1) * (r.rho_1 - c.rho_1) +
                     (r.rho_2 - c.rho_2) * (r.rho_2 - c.rho_2) +
                     (r.rho_12 - c.rho_12) * (r.rho_12 - c.rho_12);
    return combine_rates(1.0 + d, 2.0, 0.5, 0.5);
  };
}

}  // namespace

TEST_CASE("search config validation") {
  SearchConfig c;
  CHECK_NOTHROW(c.validate());
  c.coarse_resolution = 0.0;
  CHECK_THROWS_AS(c.validate(), PreconditionError);
  c = {};
  c.refine_shrink = 1.0;
  CHECK_THROWS_AS(c.validate(), PreconditionError);
  c = {};
  c.threads = 0;
  CHECK_THROWS_AS(c.validate(), PreconditionError);
}

TEST_CASE("refinement finds an off-grid interior minimum") {
  const CorrelationTriple target{0.312, -0.187, 0.093};
  const OptimizationResult r = minimize_rate(bowl(target), {});
  CHECK(std::abs(r.rho_star.rho_1 - target.rho_1) <= 2e-3);
  CHECK(std::abs(r.rho_star.rho_2 - target.rho_2) <= 2e-3);
  CHECK(std::abs(r.rho_star.rho_12 - target.rho_12) <= 2e-3);
  CHECK(r.rate.secure_rate <= 0.5 + 1e-5);
  CHECK_FALSE(r.on_boundary);
  CHECK(r.evaluations > 0);
}

TEST_CASE("ties resolve to the lexicographically smallest feasible point") {
  const RateObjective flat = [](const CorrelationTriple&) -> std::optional<RateBreakdown> {
    return combine_rates(1.0, 0.5, 0.5, 0.5);
  };
  const OptimizationResult r = minimize_rate(flat, {});
  CHECK(r.rho_star == CorrelationTriple{-1.0, -1.0, 1.0});
  CHECK(r.on_boundary);
}

TEST_CASE("undefined points are skipped and an empty domain is an error") {
  const RateObjective none = [](const CorrelationTriple&) -> std::optional<RateBreakdown> {
    return std::nullopt;
  };
  CHECK_THROWS_AS(minimize_rate(none, {}), NumericalError);

  // Defined only for rho_1 >= 0.5: the minimum over that half is at 0.5.
  const RateObjective half = [](const CorrelationTriple& r) -> std::optional<RateBreakdown> {
    if (r.rho_1 < 0.5) return std::nullopt;
    return combine_rates(1.0 + r.rho_1, 2.0, 0.1, 0.1);
  };
  const OptimizationResult h = minimize_rate(half, {});
  CHECK(h.rho_star.rho_1 == doctest::Approx(0.5));
}

TEST_CASE("results are identical across thread counts") {
  Lcg64 rng(77);
  for (int i = 0; i < 3; ++i) {
    const GeneralGaussianParams p = draw_general(rng);
    SearchConfig one;
    SearchConfig four;
    four.threads = 4;
    const OptimizationResult a = optimize_general(p, one, false);
    const OptimizationResult b = optimize_general(p, four, false);
    CHECK(a.rho_star == b.rho_star);
    CHECK(a.rate.secure_rate == b.rate.secure_rate);
    CHECK(a.evaluations == b.evaluations);
  }
}

TEST_CASE("optimum is feasible and no worse than independent inputs") {
  Lcg64 rng(78);
  for (int i = 0; i < 5; ++i) {
    const GeneralGaussianParams p = draw_general(rng);
    const OptimizationResult r = optimize_general(p, {}, false);
    CHECK(is_valid_correlation(r.rho_star));
    CHECK(r.rate.secure_rate <= rate_general_paper(p, {}).secure_rate + 1e-12);
  }
}

TEST_CASE("oracle path on a scalar-like instance") {
  // No cross or jamming links: the eavesdroppers' inputs are irrelevant to
  // the main channel and correlation can only help them.
  GeneralGaussianParams p;
  p.h_l = 2.0;
  SearchConfig cfg;
  cfg.coarse_resolution = 0.25;
  const OptimizationResult r = optimize_general(p, cfg, true);
  CHECK(is_valid_correlation(r.rho_star));
  CHECK(r.rate.secure_rate <= rate_general_oracle(p, {}).secure_rate + 1e-9);
}
