#include "wtcce/corr_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "wtcce/errors.hpp"
#include "wtcce/gauss_oracle.hpp"

namespace wtcce {

namespace {

constexpr int kMaxMovesPerPass = 10000;

std::vector<double> grid_axis(double step) {
  const int m = static_cast<int>(std::floor(1.0 / step + 1e-9));
  std::vector<double> axis;
  if (m * step < 1.0 - 1e-12) axis.push_back(-1.0);
  for (int k = -m; k <= m; ++k) axis.push_back(std::clamp(k * step, -1.0, 1.0));
  if (m * step < 1.0 - 1e-12) axis.push_back(1.0);
  return axis;
}

struct Incumbent {
  std::optional<RateBreakdown> rate;
  CorrelationTriple rho;
  std::size_t evaluations = 0;
};

bool better(const RateBreakdown& candidate, const std::optional<RateBreakdown>& incumbent) {
  return !incumbent || candidate.secure_rate < incumbent->secure_rate;
}

Incumbent scan_slab(const RateObjective& objective, const std::vector<double>& axis,
                    std::size_t first, std::size_t last) {
  Incumbent best;
  for (std::size_t i = first; i < last; ++i) {
    for (double r2 : axis) {
      for (double r12 : axis) {
        const CorrelationTriple rho{axis[i], r2, r12};
        if (!is_valid_correlation(rho)) continue;
        ++best.evaluations;
        auto value = objective(rho);
        if (value && better(*value, best.rate)) {
          best.rate = value;
          best.rho = rho;
        }
      }
    }
  }
  return best;
}

// Half-width, in steps, of the local refinement grid: it spans the
// previous pass's step so consecutive passes nest.
int local_half_width(double shrink) {
  return std::max(1, static_cast<int>(std::lround(1.0 / shrink)));
}

}  // namespace

void SearchConfig::validate() const {
  if (!(coarse_resolution > 0.0 && coarse_resolution <= 0.5)) {
    throw PreconditionError("coarse_resolution must lie in (0, 0.5]");
  }
  if (refine_iterations < 0) throw PreconditionError("refine_iterations must be >= 0");
  if (!(refine_shrink > 0.0 && refine_shrink < 1.0)) {
    throw PreconditionError("refine_shrink must lie in (0, 1)");
  }
  if (!(tolerance > 0.0)) throw PreconditionError("tolerance must be positive");
  if (threads == 0) throw PreconditionError("threads must be >= 1");
}

OptimizationResult minimize_rate(const RateObjective& objective, const SearchConfig& cfg) {
  cfg.validate();
  const std::vector<double> axis = grid_axis(cfg.coarse_resolution);

  // Contiguous slabs of rho_1, merged in slab order: the reduction matches
  // the sequential scan for any thread count.
  const std::size_t workers = std::min<std::size_t>(cfg.threads, axis.size());
  std::vector<Incumbent> partial(workers);
  if (workers == 1) {
    partial[0] = scan_slab(objective, axis, 0, axis.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (axis.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t first = std::min(axis.size(), w * chunk);
      const std::size_t last = std::min(axis.size(), first + chunk);
      pool.emplace_back([&, w, first, last] { partial[w] = scan_slab(objective, axis, first, last); });
    }
  }

  Incumbent best;
  for (const Incumbent& part : partial) {
    best.evaluations += part.evaluations;
    if (part.rate && better(*part.rate, best.rate)) {
      best.rate = part.rate;
      best.rho = part.rho;
    }
  }
  if (!best.rate) throw NumericalError("minimize_rate: objective undefined on every grid point");

  // Local grids around the incumbent, recentred until they stop paying off.
  // A dense local grid follows the ridges that min(RL1, max(A1, A2)) creates,
  // where moves along a few fixed directions stall.
  const int m = local_half_width(cfg.refine_shrink);
  double step = cfg.coarse_resolution;
  for (int pass = 0; pass < cfg.refine_iterations; ++pass) {
    step *= cfg.refine_shrink;
    for (int move = 0; move < kMaxMovesPerPass; ++move) {
      std::optional<RateBreakdown> move_rate;
      CorrelationTriple move_rho;
      const CorrelationTriple c = best.rho;
      for (int a = -m; a <= m; ++a) {
        for (int b = -m; b <= m; ++b) {
          for (int d = -m; d <= m; ++d) {
            const CorrelationTriple cand{std::clamp(c.rho_1 + a * step, -1.0, 1.0),
                                         std::clamp(c.rho_2 + b * step, -1.0, 1.0),
                                         std::clamp(c.rho_12 + d * step, -1.0, 1.0)};
            if (cand == c || !is_valid_correlation(cand)) continue;
            ++best.evaluations;
            auto value = objective(cand);
            if (value && better(*value, move_rate)) {
              move_rate = value;
              move_rho = cand;
            }
          }
        }
      }
      if (!move_rate || !(move_rate->secure_rate < best.rate->secure_rate)) break;
      const double gain = best.rate->secure_rate - move_rate->secure_rate;
      best.rate = move_rate;
      best.rho = move_rho;
      if (gain < cfg.tolerance) break;
    }
  }

  OptimizationResult out;
  out.rho_star = best.rho;
  out.rate = *best.rate;
  out.evaluations = best.evaluations;
  out.on_boundary =
      correlation_determinant(best.rho) <= cfg.coarse_resolution * cfg.coarse_resolution;
  return out;
}

OptimizationResult optimize_general(const GeneralGaussianParams& p, const SearchConfig& cfg,
                                    bool use_oracle) {
  p.validate();
  if (use_oracle) {
    return minimize_rate(
        [&p](const CorrelationTriple& rho) -> std::optional<RateBreakdown> {
          return rate_general_oracle(p, rho);
        },
        cfg);
  }
  return minimize_rate(
      [&p](const CorrelationTriple& rho) { return try_rate_general_paper(p, rho); }, cfg);
}

}  // namespace wtcce
