#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "wtcce/gauss_rates.hpp"

namespace wtcce::dm {

// Variable positions inside a joint p.m.f. over the six channel variables.
enum Var : std::size_t { Xl = 0, X1e = 1, X2e = 2, Yl = 3, Y1e = 4, Y2e = 5 };

using VarSet = std::vector<std::size_t>;
using StochasticMatrix = std::vector<std::vector<double>>;  // [input][output]

// Single-letter transition p(y_l, y_1e, y_2e | x_l, x_1e, x_2e).
//
// Storage is row-major in the order (y_l, y_1e, y_2e, x_l, x_1e, x_2e),
// slowest to fastest, which is also the order of the text format.
class DMChannel {
 public:
  // sizes = {|X_l|, |X_1e|, |X_2e|, |Y_l|, |Y_1e|, |Y_2e|}.
  DMChannel(std::array<std::size_t, 6> sizes, std::vector<double> transition);

  const std::array<std::size_t, 6>& sizes() const { return sizes_; }
  const std::vector<double>& transition() const { return transition_; }
  std::size_t input_count() const { return sizes_[0] * sizes_[1] * sizes_[2]; }
  std::size_t output_count() const { return sizes_[3] * sizes_[4] * sizes_[5]; }

  double operator()(std::size_t yl, std::size_t y1e, std::size_t y2e, std::size_t xl,
                    std::size_t x1e, std::size_t x2e) const {
    return transition_[flat(yl, y1e, y2e, xl, x1e, x2e)];
  }

  std::size_t flat(std::size_t yl, std::size_t y1e, std::size_t y2e, std::size_t xl,
                   std::size_t x1e, std::size_t x2e) const {
    return ((((yl * sizes_[4] + y1e) * sizes_[5] + y2e) * sizes_[0] + xl) * sizes_[1] + x1e) *
               sizes_[2] +
           x2e;
  }

 private:
  std::array<std::size_t, 6> sizes_;
  std::vector<double> transition_;
};

// q(x_1e, x_2e), row-major [x_1e][x_2e].
struct EavesdropperInputDist {
  std::size_t n1 = 1;
  std::size_t n2 = 1;
  std::vector<double> q{1.0};

  double operator()(std::size_t x1e, std::size_t x2e) const { return q[x1e * n2 + x2e]; }
  void validate() const;
};

// r(x_l | x_1e, x_2e), row-major [x_1e][x_2e][x_l].
struct LegitimateInputDist {
  std::size_t nl = 1;
  std::size_t n1 = 1;
  std::size_t n2 = 1;
  std::vector<double> r{1.0};

  double operator()(std::size_t xl, std::size_t x1e, std::size_t x2e) const {
    return r[(x1e * n2 + x2e) * nl + xl];
  }
  void validate() const;
};

// Joint p.m.f. over several finite variables, row-major with the last
// variable fastest.
struct Pmf {
  std::vector<std::size_t> dims;
  std::vector<double> p;
};

// Marginal over `vars` (in the given order).
Pmf marginal(const Pmf& joint, const VarSet& vars);

// Shannon entropy in bits with 0 log 0 = 0.
double entropy_bits(const std::vector<double>& p);

// q(x_1e,x_2e) r(x_l|x_1e,x_2e) p(y|x) over (X_l, X_1e, X_2e, Y_l, Y_1e, Y_2e).
Pmf joint_distribution(const DMChannel& ch, const LegitimateInputDist& r,
                       const EavesdropperInputDist& q);

// I(A; B | C) in bits, clamped at 0.
double mutual_info_discrete(const Pmf& joint, const VarSet& a, const VarSet& b,
                            const VarSet& c = {});

// main = I(X_l;Y_l), RL1 = I(X_l; Y_1e,Y_2e | X_1e,X_2e), A_j = I(X_l,X_1e,X_2e; Y_je).
RateBreakdown rate_dm_fixed(const DMChannel& ch, const LegitimateInputDist& r,
                            const EavesdropperInputDist& q);

struct SupInfResult {
  double rate = 0.0;
  LegitimateInputDist r;         // maximizing legitimate input
  EavesdropperInputDist q;       // minimizing eavesdropper input at r
  RateBreakdown breakdown;       // rate_dm_fixed(ch, r, q)
  double inner_recheck_rate = 0.0;  // inner minimum at r on the half-step grid
  std::size_t grid_size = 0;        // outer points x inner points
  std::size_t evaluations = 0;
};

constexpr std::size_t kDefaultGridBudget = 20'000'000;

// max over gridded r of min over gridded q of secure_rate. Both simplices
// are discretized with step `resolution` (1/resolution must be an integer);
// ties go to the first point in lexicographic grid order. Throws
// NumericalError if the grid exceeds `budget` evaluations.
SupInfResult sup_inf_rate(const DMChannel& ch, double resolution,
                          std::size_t budget = kDefaultGridBudget);

// All compositions of `total` into `parts` non-negative integers, in
// lexicographic order.
std::vector<std::vector<int>> simplex_grid(int total, std::size_t parts);

// p(y_l, y_1e^m, y_2e^m | x_l), stored (y_l, y_1m, y_2m, x_l) slowest to fastest.
struct MainComponent {
  std::size_t nxl = 1, nyl = 1, ny1m = 1, ny2m = 1;
  std::vector<double> p{1.0};

  double operator()(std::size_t yl, std::size_t y1m, std::size_t y2m, std::size_t xl) const {
    return p[((yl * ny1m + y1m) * ny2m + y2m) * nxl + xl];
  }
};

// p(y_1e^c, y_2e^c | x_1e, x_2e), stored (y_1c, y_2c, x_1e, x_2e) slowest to fastest.
struct CollusionComponent {
  std::size_t nx1 = 1, nx2 = 1, ny1c = 1, ny2c = 1;
  std::vector<double> p{1.0};

  double operator()(std::size_t y1c, std::size_t y2c, std::size_t x1, std::size_t x2) const {
    return p[((y1c * ny2c + y2c) * nx1 + x1) * nx2 + x2];
  }
};

StochasticMatrix bsc(double crossover);

// Conditionally independent outputs: Y_l ~ w_l(.|x), Y_je^m ~ w_j(.|x).
MainComponent main_from_marginals(const StochasticMatrix& w_l, const StochasticMatrix& w_1,
                                  const StochasticMatrix& w_2);

// Y_1e^c ~ v_1(.|x_2e) and Y_2e^c ~ v_2(.|x_1e), independently.
CollusionComponent collusion_from_links(const StochasticMatrix& v_1, const StochasticMatrix& v_2);

// Single-symbol eavesdropper inputs and outputs: no collusion link.
CollusionComponent no_collusion();

// Product channel with Y_je = (Y_je^m, Y_je^c), encoded y_m * |Y_je^c| + y_c.
DMChannel build_orthogonal_dm(const MainComponent& main, const CollusionComponent& collusion);

// Eavesdropper inputs fixed to the null symbol 0.
DMChannel reduce_noncolluding(const DMChannel& ch);

// Each eavesdropper additionally sees a noiseless copy of the other's main
// output: Y_1e = (Y_1e^m, Y_2e^m), Y_2e = (Y_2e^m, Y_1e^m). Singleton inputs.
DMChannel reduce_perfectcolluding(const MainComponent& main);

// Text format:
//   # comment lines allowed anywhere
//   |X_l| |X_1e| |X_2e| |Y_l| |Y_1e| |Y_2e|
//   transition values in storage order, whitespace separated
void write_channel(std::ostream& os, const DMChannel& ch);
DMChannel read_channel(std::istream& is);
DMChannel load_channel(const std::string& path);

}  // namespace wtcce::dm
