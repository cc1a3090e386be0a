// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances, seeds and instance sizes are pinned here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "wtcce/corr_optimizer.hpp"
#include "wtcce/dm_core.hpp"
#include "wtcce/gauss_oracle.hpp"
#include "wtcce/gauss_rates.hpp"
#include "wtcce/lcg.hpp"
#include "wtcce/scenario.hpp"

using namespace wtcce;

namespace {

constexpr double kOracleTol = 1e-9;           // criteria 1, 2
constexpr double kReductionTol = 1e-12;       // criterion 3, P_je = 0
constexpr double kLargePowerTol = 1e-6;       // criteria 3 and 4
constexpr double kLargePower = 1e9;
constexpr double kOrderingSlack = 1e-12;      // criterion 5
constexpr double kFigureSlack = 1e-9;         // criterion 6
constexpr double kDmTol = 0.02;               // criteria 7, 8
constexpr double kOptimizerTol = 1e-3;        // criterion 9
constexpr double kGaussPropertyTol = 1e-9;    // criterion 10
constexpr double kDiscretePropertyTol = 1e-12;
constexpr double kRuntimeOrthogonal = 5.0;    // seconds
constexpr double kRuntimeDm = 60.0;

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("criterion %2d %s: %s (%s)\n", id, ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double max_field_diff(const RateBreakdown& a, const RateBreakdown& b) {
  return std::max({std::abs(a.main_rate - b.main_rate), std::abs(a.leak_RL1 - b.leak_RL1),
                   std::abs(a.leak_A1 - b.leak_A1), std::abs(a.leak_A2 - b.leak_A2),
                   std::abs(a.effective_leakage - b.effective_leakage),
                   std::abs(a.secure_rate - b.secure_rate)});
}

double h2(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

std::string config_path(const std::string& name) { return std::string(WTCCE_CONFIG_DIR) + "/" + name; }

void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  Lcg64 rng(101);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const OrthogonalGaussianParams p = draw_orthogonal(rng);
    worst = std::max(worst, max_field_diff(rate_orthogonal(p), rate_orthogonal_oracle(p)));
  }
  const double dt = seconds_since(t0);
  report(1, "orthogonal closed form vs oracle, 1000 draws",
         worst <= kOracleTol && dt < kRuntimeOrthogonal,
         fmt("max |diff| %.3g", worst) + fmt(", %.2f s", dt));
}

void criterion_2() {
  Lcg64 rng(202);
  double worst_zero = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const GeneralGaussianParams p = draw_general(rng);
    worst_zero = std::max(worst_zero, max_field_diff(rate_general_paper(p, {}), rate_general_oracle(p, {})));
  }
  double worst_a = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const GeneralGaussianParams p = draw_general(rng);
    const CorrelationTriple rho = draw_correlation(rng);
    const RateBreakdown o = rate_general_oracle(p, rho);
    worst_a = std::max({worst_a, std::abs(leakage_A(1, p, rho) - o.leak_A1),
                        std::abs(leakage_A(2, p, rho) - o.leak_A2)});
  }
  report(2, "general closed form vs oracle at rho = 0, A(j) for any rho",
         worst_zero <= kOracleTol && worst_a <= kOracleTol,
         fmt("rho = 0 max |diff| %.3g", worst_zero) + fmt(", A(j) max |diff| %.3g", worst_a));
}

void criterion_3() {
  Lcg64 rng(303);
  std::size_t bit_exact = 0;
  double worst_zero = 0.0;
  double worst_large = 0.0;
  for (int i = 0; i < 100; ++i) {
    OrthogonalGaussianParams p = draw_orthogonal(rng);
    p.P_1e = p.P_2e = 0.0;
    const double og = rate_orthogonal(p).secure_rate;
    const double nc = rate_noncolluding(p);
    if (og == nc) ++bit_exact;
    worst_zero = std::max(worst_zero, std::abs(og - nc));
    p.P_1e = p.P_2e = kLargePower;
    worst_large = std::max(worst_large, std::abs(rate_orthogonal(p).secure_rate - rate_perfectcolluding(p)));
  }
  report(3, "orthogonal reductions to non-colluding and perfect-colluding",
         worst_zero <= kReductionTol && worst_large <= kLargePowerTol,
         std::to_string(bit_exact) + "/100 bit-exact at P_je = 0" + fmt(", max |diff| %.3g", worst_zero) +
             fmt("; at P_je = 1e9 max |diff| %.3g", worst_large));
}

void criterion_4() {
  double worst = 0.0;
  for (const char* name : {"fig3a.json", "fig3b.json"}) {
    ScenarioConfig cfg = load_config(config_path(name));
    for (double pl : {1.0, 10.0, 20.0}) {
      GeneralGaussianParams p = *cfg.general;
      p.P_l = pl;
      p.P_1e = p.P_2e = kLargePower;
      SearchConfig search = cfg.optimizer;
      search.threads = std::max(1u, std::thread::hardware_concurrency());
      worst = std::max(worst, optimize_general(p, search, true).rate.secure_rate);
    }
  }
  report(4, "jamming at P_je = 1e9 drives the general rate to zero (oracle path)", worst <= kLargePowerTol,
         fmt("max secure rate %.3g over fig3a/fig3b at P_l = 1, 10, 20", worst));
}

struct Sweeps {
  SweepTable a, b;
};

void criterion_5(const Sweeps& s) {
  // Columns: param, R_nc, R_pc, R_og, R_njg, R_g.
  double worst = -INFINITY;
  auto check = [&](double pc, double og, double nc) {
    worst = std::max({worst, pc - og, og - nc});
  };
  for (const SweepTable* t : {&s.a, &s.b}) {
    for (const auto& row : t->rows) check(row[2], row[3], row[1]);
  }
  Lcg64 rng(505);
  for (int i = 0; i < 1000; ++i) {
    const OrthogonalGaussianParams p = draw_orthogonal(rng);
    check(rate_perfectcolluding(p), rate_orthogonal(p).secure_rate, rate_noncolluding(p));
  }
  report(5, "R_pc <= R_og <= R_nc on both sweeps and 1000 draws", worst <= kOrderingSlack,
         fmt("largest violation %.3g", std::max(worst, 0.0)));
}

void criterion_6(const Sweeps& s) {
  std::size_t bad_a = 0, bad_b = 0;
  double first_bad_a = NAN, worst_a = 0.0, worst_b = 0.0;
  for (const auto& row : s.a.rows) {
    const double gap = row[4] - row[3];  // R_njg - R_og, must be <= 0
    if (gap > kFigureSlack) {
      if (bad_a++ == 0) first_bad_a = row[0];
      worst_a = std::max(worst_a, gap);
    }
  }
  for (const auto& row : s.b.rows) {
    const double gap = row[3] - row[4];
    if (gap > kFigureSlack) {
      ++bad_b;
      worst_b = std::max(worst_b, gap);
    }
  }
  std::string detail = "fig3a R_og >= R_njg fails at " + std::to_string(bad_a) + "/" +
                       std::to_string(s.a.rows.size()) + " points";
  if (bad_a) detail += fmt(" from P_l = %.1f", first_bad_a) + fmt(", worst gap %.3g", worst_a);
  detail += "; fig3b R_og <= R_njg fails at " + std::to_string(bad_b) + "/" +
            std::to_string(s.b.rows.size()) + " points";
  if (bad_b) detail += fmt(", worst gap %.3g", worst_b);
  report(6, "fig3a and fig3b orderings", bad_a == 0 && bad_b == 0, detail);
}

dm::MainComponent bsc_main() {
  return dm::main_from_marginals(dm::bsc(0.1), dm::bsc(0.3), dm::bsc(0.3));
}

void criterion_7() {
  const auto t0 = std::chrono::steady_clock::now();
  const dm::DMChannel ch = dm::build_orthogonal_dm(bsc_main(), dm::no_collusion());
  const double rate = dm::sup_inf_rate(ch, 0.05).rate;
  const double dt = seconds_since(t0);
  const double expected = h2(0.3) - h2(0.1);
  report(7, "degraded BSC wiretap sup-inf rate", std::abs(rate - expected) <= kDmTol && dt < kRuntimeDm,
         fmt("rate %.6f", rate) + fmt(", h2(0.3) - h2(0.1) = %.6f", expected) + fmt(", %.3f s", dt));
}

// max over p(x_l) on a 1e-3 grid of I(X_l;Y_l) - max_j I(X_l;Y_je), computed
// from the sliced channel's marginal transition matrices.
double direct_noncolluding_rate(const dm::DMChannel& ch) {
  const auto& s = ch.sizes();
  const std::size_t nx = s[0];
  std::vector<std::vector<double>> wl(nx, std::vector<double>(s[3])), w1(nx, std::vector<double>(s[4])),
      w2(nx, std::vector<double>(s[5]));
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t a = 0; a < s[3]; ++a)
      for (std::size_t b = 0; b < s[4]; ++b)
        for (std::size_t c = 0; c < s[5]; ++c) {
          const double v = ch(a, b, c, x, 0, 0);
          wl[x][a] += v;
          w1[x][b] += v;
          w2[x][c] += v;
        }
  auto mi = [nx](const std::vector<double>& px, const std::vector<std::vector<double>>& w) {
    double total = 0.0;
    for (std::size_t y = 0; y < w[0].size(); ++y) {
      double py = 0.0;
      for (std::size_t x = 0; x < nx; ++x) py += px[x] * w[x][y];
      for (std::size_t x = 0; x < nx; ++x) {
        if (px[x] > 0 && w[x][y] > 0) total += px[x] * w[x][y] * std::log2(w[x][y] / py);
      }
    }
    return total;
  };
  double best = 0.0;
  for (int k = 0; k <= 1000; ++k) {
    const std::vector<double> px{k / 1000.0, 1.0 - k / 1000.0};
    best = std::max(best, mi(px, wl) - std::max(mi(px, w1), mi(px, w2)));
  }
  return best;
}

void criterion_8() {
  const dm::DMChannel full =
      dm::build_orthogonal_dm(bsc_main(), dm::collusion_from_links(dm::bsc(0.2), dm::bsc(0.2)));
  const dm::DMChannel nc = dm::reduce_noncolluding(full);
  const double r_nc = dm::sup_inf_rate(nc, 0.05).rate;
  const double r_pc = dm::sup_inf_rate(dm::reduce_perfectcolluding(bsc_main()), 0.05).rate;
  const double direct = direct_noncolluding_rate(nc);
  report(8, "DM reductions: perfect <= non-colluding, non-colluding vs direct formula",
         r_pc <= r_nc && std::abs(r_nc - direct) <= kDmTol,
         fmt("R_pc %.6f", r_pc) + fmt(", R_nc %.6f", r_nc) + fmt(", direct %.6f", direct));
}

void criterion_9() {
  Lcg64 rng(909);
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  double worst = 0.0;
  bool all_valid = true, deterministic = true;
  for (int i = 0; i < 20; ++i) {
    const GeneralGaussianParams p = draw_general(rng);
    SearchConfig cfg;  // 0.05 grid, 3 refinement passes
    const OptimizationResult a = optimize_general(p, cfg, false);
    cfg.threads = 3;
    const OptimizationResult b = optimize_general(p, cfg, false);
    deterministic = deterministic && a.rho_star == b.rho_star && a.rate.secure_rate == b.rate.secure_rate;
    all_valid = all_valid && is_valid_correlation(a.rho_star);

    SearchConfig ref;
    ref.coarse_resolution = 0.01;
    ref.refine_iterations = 0;
    ref.threads = hw;
    const OptimizationResult r = optimize_general(p, ref, false);
    worst = std::max(worst, std::abs(a.rate.secure_rate - r.rate.secure_rate));
  }
  report(9, "optimizer vs exhaustive 0.01 grid on 20 objectives",
         worst <= kOptimizerTol && all_valid && deterministic,
         fmt("max |diff| %.3g", worst) + (all_valid ? ", all rho* PSD" : ", non-PSD rho*") +
             (deterministic ? ", identical for 1 and 3 threads" : ", thread-dependent"));
}

dm::DMChannel random_dm(Lcg64& rng) {
  std::vector<double> t(2 * 2 * 3 * 2 * 2 * 2);
  const std::array<std::size_t, 6> sizes{2, 2, 2, 2, 2, 3};
  const std::size_t inputs = 8, outputs = 12;
  for (std::size_t in = 0; in < inputs; ++in) {
    double sum = 0.0;
    std::vector<double> col(outputs);
    for (auto& v : col) sum += (v = rng.uniform() + 1e-3);
    for (std::size_t out = 0; out < outputs; ++out) t[out * inputs + in] = col[out] / sum;
  }
  return dm::DMChannel(sizes, t);
}

void criterion_10() {
  Lcg64 rng(1010);
  double gauss_chain = 0.0, gauss_min = INFINITY;
  for (int i = 0; i < 500; ++i) {
    const GeneralGaussianParams p = draw_general(rng);
    const JointCovariance c = build_joint_covariance_general(p, draw_correlation(rng));
    const IndexSet x = c.indices({"X_l", "X_1e", "X_2e"});
    const std::size_t y1 = c.index("Y_1e"), y2 = c.index("Y_2e"), yl = c.index("Y_l");
    const double whole = mi_gaussian(c, x, {y1, y2, yl});
    const double parts = mi_gaussian(c, x, {y1}) + mi_gaussian(c, x, {y2}, {y1}) +
                         mi_gaussian(c, x, {yl}, {y1, y2});
    gauss_chain = std::max(gauss_chain, std::abs(whole - parts));
    gauss_min = std::min({gauss_min, whole, mi_gaussian(c, {x[0]}, {yl}, {x[1], x[2]})});
  }

  double dm_chain = 0.0, dm_min = INFINITY;
  for (int i = 0; i < 500; ++i) {
    const dm::DMChannel ch = random_dm(rng);
    std::vector<double> r(8), q(4);
    for (std::size_t ctx = 0; ctx < 4; ++ctx) {
      const double u = rng.uniform();
      r[2 * ctx] = u;
      r[2 * ctx + 1] = 1.0 - u;
    }
    double s = 0.0;
    for (auto& v : q) s += (v = rng.uniform() + 1e-3);
    for (auto& v : q) v /= s;
    const dm::Pmf j = dm::joint_distribution(ch, {2, 2, 2, r}, {2, 2, q});
    const dm::VarSet x{dm::Xl, dm::X1e, dm::X2e};
    const double whole = dm::mutual_info_discrete(j, x, {dm::Y1e, dm::Y2e, dm::Yl});
    const double parts = dm::mutual_info_discrete(j, x, {dm::Y1e}) +
                         dm::mutual_info_discrete(j, x, {dm::Y2e}, {dm::Y1e}) +
                         dm::mutual_info_discrete(j, x, {dm::Yl}, {dm::Y1e, dm::Y2e});
    dm_chain = std::max(dm_chain, std::abs(whole - parts));
    dm_min = std::min({dm_min, whole, dm::mutual_info_discrete(j, {dm::Xl}, {dm::Yl}, {dm::X1e})});
  }

  bool theta_monotone = true;
  double scale_diff = 0.0;
  for (int i = 0; i < 500; ++i) {
    const double a = rng.uniform(0.0, 1e3);
    const double b = a + rng.uniform(1e-9, 10.0);
    theta_monotone = theta_monotone && theta(a) < theta(b);

    const OrthogonalGaussianParams p = draw_orthogonal(rng);
    OrthogonalGaussianParams s = p;
    const double k = rng.uniform(1e-3, 1e3);
    for (double* v : {&s.P_l, &s.P_1e, &s.P_2e, &s.N_l, &s.N_1e_m, &s.N_2e_m, &s.N_1e_c, &s.N_2e_c}) *v *= k;
    scale_diff = std::max(scale_diff, max_field_diff(rate_orthogonal(p), rate_orthogonal(s)));
    scale_diff = std::max({scale_diff, std::abs(rate_noncolluding(p) - rate_noncolluding(s)),
                           std::abs(rate_perfectcolluding(p) - rate_perfectcolluding(s))});
  }

  const bool ok = gauss_chain <= kGaussPropertyTol && gauss_min >= 0.0 && dm_chain <= kDiscretePropertyTol &&
                  dm_min >= 0.0 && theta_monotone && scale_diff <= kGaussPropertyTol;
  report(10, "property suites", ok,
         fmt("Gaussian chain rule %.3g", gauss_chain) + fmt(", discrete chain rule %.3g", dm_chain) +
             ", MI >= 0" + (theta_monotone ? ", theta monotone" : ", theta NOT monotone") +
             fmt(", scale invariance %.3g", scale_diff));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();

  Sweeps sweeps;
  for (auto [name, table] : {std::pair{"fig3a.json", &sweeps.a}, std::pair{"fig3b.json", &sweeps.b}}) {
    ScenarioConfig cfg = load_config(config_path(name));
    cfg.optimizer.threads = std::max(1u, std::thread::hardware_concurrency());
    *table = run_sweep(cfg);
  }
  criterion_5(sweeps);
  criterion_6(sweeps);
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();

  std::printf("%d of 10 criteria failed, %.1f s\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
