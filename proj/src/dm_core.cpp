#include "wtcce/dm_core.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "wtcce/errors.hpp"

namespace wtcce::dm {

namespace {

constexpr double kSumTolerance = 1e-12;

std::size_t product(const std::vector<std::size_t>& dims) {
  std::size_t n = 1;
  for (std::size_t d : dims) n *= d;
  return n;
}

void check_probability(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    throw PreconditionError(std::string(what) + ": entry outside [0, 1]");
  }
}

void check_stochastic(const StochasticMatrix& w, const char* what) {
  if (w.empty() || w.front().empty()) throw PreconditionError(std::string(what) + ": empty matrix");
  for (const auto& row : w) {
    if (row.size() != w.front().size()) throw PreconditionError(std::string(what) + ": ragged rows");
    double s = 0.0;
    for (double v : row) {
      check_probability(v, what);
      s += v;
    }
    if (std::abs(s - 1.0) > kSumTolerance) {
      throw PreconditionError(std::string(what) + ": row does not sum to 1");
    }
  }
}

// Converts one grid composition per context into a probability vector.
void fill_from_compositions(const std::vector<const std::vector<int>*>& parts, int total,
                            std::vector<double>& out) {
  std::size_t k = 0;
  for (const auto* comp : parts) {
    for (int c : *comp) out[k++] = static_cast<double>(c) / total;
  }
}

int divisions(double resolution) {
  if (!(resolution > 0.0 && resolution <= 1.0)) {
    throw PreconditionError("grid resolution must lie in (0, 1]");
  }
  const double n = 1.0 / resolution;
  const double rounded = std::round(n);
  if (std::abs(n - rounded) > 1e-9) {
    throw PreconditionError("1/resolution must be an integer");
  }
  return static_cast<int>(rounded);
}

double secure_rate_at(const DMChannel& ch, const LegitimateInputDist& r,
                      const EavesdropperInputDist& q) {
  return rate_dm_fixed(ch, r, q).secure_rate;
}

}  // namespace

DMChannel::DMChannel(std::array<std::size_t, 6> sizes, std::vector<double> transition)
    : sizes_(sizes), transition_(std::move(transition)) {
  for (std::size_t s : sizes_) {
    if (s == 0) throw PreconditionError("DMChannel: alphabet sizes must be >= 1");
  }
  if (transition_.size() != input_count() * output_count()) {
    throw PreconditionError("DMChannel: transition size does not match alphabet sizes");
  }
  std::vector<double> sums(input_count(), 0.0);
  for (std::size_t o = 0; o < output_count(); ++o) {
    for (std::size_t i = 0; i < input_count(); ++i) {
      const double v = transition_[o * input_count() + i];
      check_probability(v, "DMChannel");
      sums[i] += v;
    }
  }
  for (double s : sums) {
    if (std::abs(s - 1.0) > kSumTolerance) {
      throw PreconditionError("DMChannel: transition for some input does not sum to 1");
    }
  }
}

void EavesdropperInputDist::validate() const {
  if (q.size() != n1 * n2) throw PreconditionError("EavesdropperInputDist: size mismatch");
  double s = 0.0;
  for (double v : q) {
    check_probability(v, "EavesdropperInputDist");
    s += v;
  }
  if (std::abs(s - 1.0) > kSumTolerance) {
    throw PreconditionError("EavesdropperInputDist: does not sum to 1");
  }
}

void LegitimateInputDist::validate() const {
  if (r.size() != nl * n1 * n2) throw PreconditionError("LegitimateInputDist: size mismatch");
  for (std::size_t c = 0; c < n1 * n2; ++c) {
    double s = 0.0;
    for (std::size_t x = 0; x < nl; ++x) {
      check_probability(r[c * nl + x], "LegitimateInputDist");
      s += r[c * nl + x];
    }
    if (std::abs(s - 1.0) > kSumTolerance) {
      throw PreconditionError("LegitimateInputDist: a conditional column does not sum to 1");
    }
  }
}

Pmf marginal(const Pmf& joint, const VarSet& vars) {
  const std::size_t nv = joint.dims.size();
  std::vector<std::size_t> strides(nv, 1);
  for (std::size_t i = nv; i-- > 1;) strides[i - 1] = strides[i] * joint.dims[i];

  Pmf out;
  for (std::size_t v : vars) {
    if (v >= nv) throw PreconditionError("marginal: variable index out of range");
    out.dims.push_back(joint.dims[v]);
  }
  out.p.assign(product(out.dims), 0.0);

  std::vector<std::size_t> out_strides(vars.size(), 1);
  for (std::size_t i = vars.size(); i-- > 1;) out_strides[i - 1] = out_strides[i] * out.dims[i];

  for (std::size_t flat = 0; flat < joint.p.size(); ++flat) {
    const double v = joint.p[flat];
    if (v == 0.0) continue;
    std::size_t o = 0;
    for (std::size_t k = 0; k < vars.size(); ++k) {
      const std::size_t digit = (flat / strides[vars[k]]) % joint.dims[vars[k]];
      o += digit * out_strides[k];
    }
    out.p[o] += v;
  }
  return out;
}

double entropy_bits(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

Pmf joint_distribution(const DMChannel& ch, const LegitimateInputDist& r,
                       const EavesdropperInputDist& q) {
  const auto& s = ch.sizes();
  if (r.nl != s[0] || r.n1 != s[1] || r.n2 != s[2] || q.n1 != s[1] || q.n2 != s[2]) {
    throw PreconditionError("joint_distribution: input distribution dimensions do not match channel");
  }
  r.validate();
  q.validate();

  Pmf out;
  out.dims = {s[0], s[1], s[2], s[3], s[4], s[5]};
  out.p.assign(product(out.dims), 0.0);
  std::size_t k = 0;
  for (std::size_t xl = 0; xl < s[0]; ++xl)
    for (std::size_t x1 = 0; x1 < s[1]; ++x1)
      for (std::size_t x2 = 0; x2 < s[2]; ++x2) {
        const double px = q(x1, x2) * r(xl, x1, x2);
        for (std::size_t yl = 0; yl < s[3]; ++yl)
          for (std::size_t y1 = 0; y1 < s[4]; ++y1)
            for (std::size_t y2 = 0; y2 < s[5]; ++y2) {
              out.p[k++] = px == 0.0 ? 0.0 : px * ch(yl, y1, y2, xl, x1, x2);
            }
      }
  return out;
}

double mutual_info_discrete(const Pmf& joint, const VarSet& a, const VarSet& b, const VarSet& c) {
  std::vector<int> seen(joint.dims.size(), 0);
  for (const VarSet* set : {&a, &b, &c}) {
    for (std::size_t v : *set) {
      if (v >= joint.dims.size()) throw PreconditionError("mutual_info_discrete: bad variable");
      if (seen[v]++) throw PreconditionError("mutual_info_discrete: variable sets must be disjoint");
    }
  }
  if (a.empty() || b.empty()) return 0.0;
  auto cat = [](VarSet x, const VarSet& y) {
    x.insert(x.end(), y.begin(), y.end());
    return x;
  };
  const double h_ac = entropy_bits(marginal(joint, cat(a, c)).p);
  const double h_bc = entropy_bits(marginal(joint, cat(b, c)).p);
  const double h_c = c.empty() ? 0.0 : entropy_bits(marginal(joint, c).p);
  const double h_abc = entropy_bits(marginal(joint, cat(cat(a, b), c)).p);
  return std::max(0.0, h_ac + h_bc - h_c - h_abc);
}

RateBreakdown rate_dm_fixed(const DMChannel& ch, const LegitimateInputDist& r,
                            const EavesdropperInputDist& q) {
  const Pmf joint = joint_distribution(ch, r, q);
  const double main = mutual_info_discrete(joint, {Xl}, {Yl});
  const double rl1 = mutual_info_discrete(joint, {Xl}, {Y1e, Y2e}, {X1e, X2e});
  const double a1 = mutual_info_discrete(joint, {Xl, X1e, X2e}, {Y1e});
  const double a2 = mutual_info_discrete(joint, {Xl, X1e, X2e}, {Y2e});
  return combine_rates(main, rl1, a1, a2);
}

std::vector<std::vector<int>> simplex_grid(int total, std::size_t parts) {
  std::vector<std::vector<int>> out;
  if (parts == 0) return out;
  std::vector<int> cur(parts, 0);
  // Depth-first in increasing order of each coordinate: lexicographic.
  auto rec = [&](auto&& self, std::size_t pos, int remaining) -> void {
    if (pos + 1 == parts) {
      cur[pos] = remaining;
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      cur[pos] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  rec(rec, 0, total);
  return out;
}

SupInfResult sup_inf_rate(const DMChannel& ch, double resolution, std::size_t budget) {
  const int n = divisions(resolution);
  const auto& s = ch.sizes();
  const std::size_t contexts = s[1] * s[2];

  const auto r_simplex = simplex_grid(n, s[0]);
  const auto q_grid = simplex_grid(n, contexts);

  // Outer grid: one r-simplex point per context, first context slowest.
  const double outer_d =
      std::pow(static_cast<double>(r_simplex.size()), static_cast<double>(contexts));
  const double total = outer_d * static_cast<double>(q_grid.size());
  if (!(total <= static_cast<double>(budget))) {
    std::ostringstream msg;
    msg << "sup_inf_rate: grid needs " << std::setprecision(6) << total
        << " evaluations, budget is " << budget;
    throw NumericalError(msg.str());
  }
  const auto outer_count = static_cast<std::size_t>(outer_d);

  SupInfResult best;
  best.grid_size = outer_count * q_grid.size();
  bool have_best = false;

  LegitimateInputDist r{s[0], s[1], s[2], std::vector<double>(s[0] * contexts)};
  EavesdropperInputDist q{s[1], s[2], std::vector<double>(contexts)};
  std::vector<std::size_t> digits(contexts, 0);
  std::vector<const std::vector<int>*> parts(contexts);

  for (std::size_t o = 0; o < outer_count; ++o) {
    std::size_t rem = o;
    for (std::size_t c = contexts; c-- > 0;) {
      digits[c] = rem % r_simplex.size();
      rem /= r_simplex.size();
    }
    for (std::size_t c = 0; c < contexts; ++c) parts[c] = &r_simplex[digits[c]];
    fill_from_compositions(parts, n, r.r);

    // Inner minimum; abandon r once it cannot beat the incumbent.
    double inner = std::numeric_limits<double>::infinity();
    std::size_t inner_arg = 0;
    bool pruned = false;
    for (std::size_t k = 0; k < q_grid.size(); ++k) {
      fill_from_compositions({&q_grid[k]}, n, q.q);
      const double v = secure_rate_at(ch, r, q);
      ++best.evaluations;
      if (v < inner) {
        inner = v;
        inner_arg = k;
      }
      if (have_best && inner <= best.rate) {
        pruned = true;
        break;
      }
    }
    if (pruned) continue;
    if (!have_best || inner > best.rate) {
      have_best = true;
      best.rate = inner;
      best.r = r;
      fill_from_compositions({&q_grid[inner_arg]}, n, q.q);
      best.q = q;
    }
  }

  best.breakdown = rate_dm_fixed(ch, best.r, best.q);

  // Inner minimum at the chosen r on a twice-finer q grid.
  const auto fine_q = simplex_grid(2 * n, contexts);
  double recheck = std::numeric_limits<double>::infinity();
  EavesdropperInputDist fq{s[1], s[2], std::vector<double>(contexts)};
  for (const auto& comp : fine_q) {
    fill_from_compositions({&comp}, 2 * n, fq.q);
    recheck = std::min(recheck, secure_rate_at(ch, best.r, fq));
    ++best.evaluations;
  }
  best.inner_recheck_rate = recheck;
  return best;
}

StochasticMatrix bsc(double crossover) {
  if (!(crossover >= 0.0 && crossover <= 1.0)) {
    throw PreconditionError("bsc: crossover probability must lie in [0, 1]");
  }
  return {{1.0 - crossover, crossover}, {crossover, 1.0 - crossover}};
}

MainComponent main_from_marginals(const StochasticMatrix& w_l, const StochasticMatrix& w_1,
                                  const StochasticMatrix& w_2) {
  check_stochastic(w_l, "main_from_marginals(w_l)");
  check_stochastic(w_1, "main_from_marginals(w_1)");
  check_stochastic(w_2, "main_from_marginals(w_2)");
  if (w_1.size() != w_l.size() || w_2.size() != w_l.size()) {
    throw PreconditionError("main_from_marginals: input alphabets differ");
  }
  MainComponent m;
  m.nxl = w_l.size();
  m.nyl = w_l.front().size();
  m.ny1m = w_1.front().size();
  m.ny2m = w_2.front().size();
  m.p.assign(m.nxl * m.nyl * m.ny1m * m.ny2m, 0.0);
  std::size_t k = 0;
  for (std::size_t yl = 0; yl < m.nyl; ++yl)
    for (std::size_t y1 = 0; y1 < m.ny1m; ++y1)
      for (std::size_t y2 = 0; y2 < m.ny2m; ++y2)
        for (std::size_t x = 0; x < m.nxl; ++x) m.p[k++] = w_l[x][yl] * w_1[x][y1] * w_2[x][y2];
  return m;
}

CollusionComponent collusion_from_links(const StochasticMatrix& v_1, const StochasticMatrix& v_2) {
  check_stochastic(v_1, "collusion_from_links(v_1)");
  check_stochastic(v_2, "collusion_from_links(v_2)");
  CollusionComponent c;
  c.nx2 = v_1.size();
  c.nx1 = v_2.size();
  c.ny1c = v_1.front().size();
  c.ny2c = v_2.front().size();
  c.p.assign(c.nx1 * c.nx2 * c.ny1c * c.ny2c, 0.0);
  std::size_t k = 0;
  for (std::size_t y1 = 0; y1 < c.ny1c; ++y1)
    for (std::size_t y2 = 0; y2 < c.ny2c; ++y2)
      for (std::size_t x1 = 0; x1 < c.nx1; ++x1)
        for (std::size_t x2 = 0; x2 < c.nx2; ++x2) c.p[k++] = v_1[x2][y1] * v_2[x1][y2];
  return c;
}

CollusionComponent no_collusion() { return CollusionComponent{}; }

DMChannel build_orthogonal_dm(const MainComponent& main, const CollusionComponent& col) {
  if (main.p.size() != main.nxl * main.nyl * main.ny1m * main.ny2m ||
      col.p.size() != col.nx1 * col.nx2 * col.ny1c * col.ny2c) {
    throw PreconditionError("build_orthogonal_dm: component tensor size mismatch");
  }
  const std::array<std::size_t, 6> sizes{main.nxl,           col.nx1, col.nx2, main.nyl,
                                         main.ny1m * col.ny1c, main.ny2m * col.ny2c};
  std::vector<double> t(sizes[0] * sizes[1] * sizes[2] * sizes[3] * sizes[4] * sizes[5]);
  std::size_t k = 0;
  for (std::size_t yl = 0; yl < main.nyl; ++yl)
    for (std::size_t y1m = 0; y1m < main.ny1m; ++y1m)
      for (std::size_t y1c = 0; y1c < col.ny1c; ++y1c)
        for (std::size_t y2m = 0; y2m < main.ny2m; ++y2m)
          for (std::size_t y2c = 0; y2c < col.ny2c; ++y2c)
            for (std::size_t xl = 0; xl < main.nxl; ++xl)
              for (std::size_t x1 = 0; x1 < col.nx1; ++x1)
                for (std::size_t x2 = 0; x2 < col.nx2; ++x2)
                  t[k++] = main(yl, y1m, y2m, xl) * col(y1c, y2c, x1, x2);
  return DMChannel(sizes, std::move(t));
}

DMChannel reduce_noncolluding(const DMChannel& ch) {
  const auto& s = ch.sizes();
  const std::array<std::size_t, 6> sizes{s[0], 1, 1, s[3], s[4], s[5]};
  std::vector<double> t;
  t.reserve(s[0] * s[3] * s[4] * s[5]);
  for (std::size_t yl = 0; yl < s[3]; ++yl)
    for (std::size_t y1 = 0; y1 < s[4]; ++y1)
      for (std::size_t y2 = 0; y2 < s[5]; ++y2)
        for (std::size_t xl = 0; xl < s[0]; ++xl) t.push_back(ch(yl, y1, y2, xl, 0, 0));
  return DMChannel(sizes, std::move(t));
}

DMChannel reduce_perfectcolluding(const MainComponent& main) {
  if (main.p.size() != main.nxl * main.nyl * main.ny1m * main.ny2m) {
    throw PreconditionError("reduce_perfectcolluding: component tensor size mismatch");
  }
  const std::size_t n1 = main.ny1m;
  const std::size_t n2 = main.ny2m;
  const std::array<std::size_t, 6> sizes{main.nxl, 1, 1, main.nyl, n1 * n2, n2 * n1};
  std::vector<double> t(sizes[0] * sizes[3] * sizes[4] * sizes[5], 0.0);
  const std::size_t s4 = sizes[4];
  const std::size_t s5 = sizes[5];
  for (std::size_t yl = 0; yl < main.nyl; ++yl)
    for (std::size_t a = 0; a < n1; ++a)
      for (std::size_t b = 0; b < n2; ++b)
        for (std::size_t xl = 0; xl < main.nxl; ++xl) {
          // Y_1e = (a, b), Y_2e = (b, a).
          const std::size_t y1 = a * n2 + b;
          const std::size_t y2 = b * n1 + a;
          t[((yl * s4 + y1) * s5 + y2) * main.nxl + xl] = main(yl, a, b, xl);
        }
  return DMChannel(sizes, std::move(t));
}

void write_channel(std::ostream& os, const DMChannel& ch) {
  const auto& s = ch.sizes();
  os << "# |X_l| |X_1e| |X_2e| |Y_l| |Y_1e| |Y_2e|\n";
  os << s[0] << ' ' << s[1] << ' ' << s[2] << ' ' << s[3] << ' ' << s[4] << ' ' << s[5] << '\n';
  os << "# p(y_l,y_1e,y_2e|x_l,x_1e,x_2e), order y_l,y_1e,y_2e,x_l,x_1e,x_2e (slowest first)\n";
  const std::size_t row = ch.input_count();
  const auto& t = ch.transition();
  os << std::setprecision(17);
  for (std::size_t o = 0; o < ch.output_count(); ++o) {
    for (std::size_t i = 0; i < row; ++i) os << (i ? " " : "") << t[o * row + i];
    os << '\n';
  }
}

DMChannel read_channel(std::istream& is) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(is, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
  }
  if (tokens.size() < 6) throw PreconditionError("channel file: missing alphabet sizes");
  std::array<std::size_t, 6> sizes{};
  for (std::size_t i = 0; i < 6; ++i) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(tokens[i], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tokens[i].size() || v < 1) {
      throw PreconditionError("channel file: bad alphabet size '" + tokens[i] + "'");
    }
    sizes[i] = static_cast<std::size_t>(v);
  }
  std::vector<double> t;
  t.reserve(tokens.size() - 6);
  for (std::size_t i = 6; i < tokens.size(); ++i) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tokens[i], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tokens[i].size()) {
      throw PreconditionError("channel file: bad probability '" + tokens[i] + "'");
    }
    t.push_back(v);
  }
  return DMChannel(sizes, std::move(t));
}

DMChannel load_channel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open channel file " + path);
  return read_channel(in);
}

}  // namespace wtcce::dm
