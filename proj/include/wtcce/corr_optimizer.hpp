#pragma once

#include <cstddef>
#include <functional>
#include <optional>

#include "wtcce/gauss_rates.hpp"

namespace wtcce {

struct SearchConfig {
  double coarse_resolution = 0.05;
  int refine_iterations = 3;
  double refine_shrink = 0.2;
  double tolerance = 1e-6;
  // Worker threads for the coarse grid. Results do not depend on this.
  unsigned threads = 1;

  void validate() const;
};

struct OptimizationResult {
  CorrelationTriple rho_star;
  RateBreakdown rate;
  std::size_t evaluations = 0;
  bool on_boundary = false;
};

// Objective over correlation triples. nullopt marks a triple where the
// objective is undefined; such points are skipped like PSD-infeasible ones.
using RateObjective = std::function<std::optional<RateBreakdown>(const CorrelationTriple&)>;

// Worst-case (minimum secure rate) search over PSD-valid correlation triples.
//
// Stage 1 scans the grid {k * coarse_resolution} (plus the endpoints +-1) in
// lexicographic (rho_1, rho_2, rho_12) order; strict improvement is required
// to replace the incumbent, so ties resolve to the lexicographically smallest
// point. Stage 2 runs refine_iterations passes of compass search around the
// incumbent over the 26 neighbour offsets of a cube, with step
// coarse_resolution * refine_shrink^(pass + 1). Each step moves to the best
// improving neighbour; a pass ends when no neighbour improves or the last
// move gained less than tolerance.
//
// Throws NumericalError if no grid point is feasible.
OptimizationResult minimize_rate(const RateObjective& objective, const SearchConfig& cfg);

// Minimizes rate_general_paper (or rate_general_oracle) over rho.
OptimizationResult optimize_general(const GeneralGaussianParams& p, const SearchConfig& cfg,
                                    bool use_oracle);

}  // namespace wtcce
