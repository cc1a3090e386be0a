#include "wtcce/gauss_rates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wtcce/errors.hpp"

namespace wtcce {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw PreconditionError(std::string(name) + " must be finite");
}

void require_power(double v, const char* name) {
  require_finite(v, name);
  if (v < 0.0) throw PreconditionError(std::string(name) + " must be non-negative");
}

void require_noise(double v, const char* name) {
  require_finite(v, name);
  if (!(v > 0.0)) throw PreconditionError(std::string(name) + " must be strictly positive");
}

// Outcome of evaluating the literal general-model formula.
enum class ClosedFormStatus { Ok, Undefined };

struct ClosedFormEval {
  ClosedFormStatus status = ClosedFormStatus::Ok;
  std::string reason;
  RateBreakdown rate;
};

ClosedFormEval eval_general_closed_form(const GeneralGaussianParams& p, const CorrelationTriple& rho,
                             CrossTermRho variant) {
  p.validate();
  validate_correlation(rho);

  const double r1 = rho.rho_1;
  const double r2 = rho.rho_2;
  const double r12 = rho.rho_12;
  const double sl1 = std::sqrt(p.P_l * p.P_1e);
  const double sl2 = std::sqrt(p.P_l * p.P_2e);
  const double s12 = std::sqrt(p.P_1e * p.P_2e);

  ClosedFormEval out;

  // Main term: coherent part over residual jamming interference plus noise.
  const double num = p.h_l * p.h_l * p.P_l + r1 * r1 * p.h_1e_l * p.h_1e_l * p.P_1e +
                     r2 * r2 * p.h_2e_l * p.h_2e_l * p.P_2e +
                     2.0 * p.h_l * p.h_1e_l * r1 * sl1 + 2.0 * p.h_l * p.h_2e_l * r2 * sl2;
  const double den = p.h_1e_l * p.h_1e_l * p.P_1e * (1.0 - r1 * r1) +
                     p.h_2e_l * p.h_2e_l * p.P_2e * (1.0 - r2 * r2) +
                     2.0 * p.h_1e_l * p.h_2e_l * r12 * s12 + p.N_l;
  if (!(den > 0.0)) {
    out.status = ClosedFormStatus::Undefined;
    out.reason = "main-rate denominator is not positive";
    return out;
  }
  const double main_snr = num / den;
  if (main_snr < 0.0) {
    out.status = ClosedFormStatus::Undefined;
    out.reason = "main-rate SNR argument is negative";
    return out;
  }

  // Joint leakage: P_l (1 - c) (h_l_1e^2/N_1e + h_l_2e^2/N_2e), with the
  // correction c taken literally (squared powers in the numerator).
  double correction = 0.0;
  if (r1 != 0.0 || r2 != 0.0) {
    const double c_den = p.P_1e * p.P_2e * (1.0 - r12 * r12);
    if (!(p.P_1e > 0.0)) {
      out.status = ClosedFormStatus::Undefined;
      out.reason = "P_1e = 0 in the joint-leakage denominator";
      return out;
    }
    if (!(p.P_2e > 0.0)) {
      out.status = ClosedFormStatus::Undefined;
      out.reason = "P_2e = 0 in the joint-leakage denominator";
      return out;
    }
    if (!(c_den > 0.0)) {
      out.status = ClosedFormStatus::Undefined;
      out.reason = "|rho_12| = 1 in the joint-leakage denominator";
      return out;
    }
    const double c_num = r1 * r1 * p.P_1e * p.P_1e + r2 * r2 * p.P_2e * p.P_2e +
                         2.0 * r1 * r2 * r12 * p.P_1e * p.P_2e;
    correction = c_num / c_den;
  }
  const double rl1_snr = p.P_l * (1.0 - correction) *
                         (p.h_l_1e * p.h_l_1e / p.N_1e + p.h_l_2e * p.h_l_2e / p.N_2e);
  if (rl1_snr < 0.0) {
    out.status = ClosedFormStatus::Undefined;
    out.reason = "joint-leakage SNR argument is negative";
    return out;
  }

  out.rate = combine_rates(theta(main_snr), theta(rl1_snr), leakage_A(1, p, rho, variant),
                           leakage_A(2, p, rho, variant));
  return out;
}

}  // namespace

void OrthogonalGaussianParams::validate() const {
  require_finite(h_l, "h_l");
  require_finite(h_1m, "h_1m");
  require_finite(h_2m, "h_2m");
  require_finite(h_1c, "h_1c");
  require_finite(h_2c, "h_2c");
  require_power(P_l, "P_l");
  require_power(P_1e, "P_1e");
  require_power(P_2e, "P_2e");
  require_noise(N_l, "N_l");
  require_noise(N_1e_m, "N_1e_m");
  require_noise(N_2e_m, "N_2e_m");
  require_noise(N_1e_c, "N_1e_c");
  require_noise(N_2e_c, "N_2e_c");
}

void GeneralGaussianParams::validate() const {
  require_finite(h_l, "h_l");
  require_finite(h_1e_l, "h_1e_l");
  require_finite(h_2e_l, "h_2e_l");
  require_finite(h_l_1e, "h_l_1e");
  require_finite(h_l_2e, "h_l_2e");
  require_finite(h_2e_1e, "h_2e_1e");
  require_finite(h_1e_2e, "h_1e_2e");
  require_power(P_l, "P_l");
  require_power(P_1e, "P_1e");
  require_power(P_2e, "P_2e");
  require_noise(N_l, "N_l");
  require_noise(N_1e, "N_1e");
  require_noise(N_2e, "N_2e");
}

double correlation_determinant(const CorrelationTriple& rho) {
  const double a = rho.rho_1;
  const double b = rho.rho_2;
  const double c = rho.rho_12;
  return 1.0 + 2.0 * a * b * c - a * a - b * b - c * c;
}

bool is_valid_correlation(const CorrelationTriple& rho) {
  for (double r : {rho.rho_1, rho.rho_2, rho.rho_12}) {
    if (!std::isfinite(r) || std::abs(r) > 1.0) return false;
  }
  return correlation_determinant(rho) >= -1e-12;
}

void validate_correlation(const CorrelationTriple& rho) {
  if (!is_valid_correlation(rho)) {
    throw PreconditionError("correlation triple (" + std::to_string(rho.rho_1) + ", " +
                            std::to_string(rho.rho_2) + ", " + std::to_string(rho.rho_12) +
                            ") is not a valid correlation matrix");
  }
}

RateBreakdown combine_rates(double main_rate, double leak_RL1, double leak_A1, double leak_A2) {
  RateBreakdown r;
  r.main_rate = main_rate;
  r.leak_RL1 = leak_RL1;
  r.leak_A1 = leak_A1;
  r.leak_A2 = leak_A2;
  r.effective_leakage = std::min(leak_RL1, std::max(leak_A1, leak_A2));
  r.clamped = main_rate < r.effective_leakage;
  r.secure_rate = r.clamped ? 0.0 : main_rate - r.effective_leakage;
  return r;
}

double theta(double x) {
  if (!std::isfinite(x) || x < 0.0) {
    throw DomainError("theta: argument must be finite and non-negative, got " +
                      std::to_string(x));
  }
  return 0.5 * std::log1p(x) / std::numbers::ln2;
}

RateBreakdown rate_orthogonal(const OrthogonalGaussianParams& p) {
  p.validate();
  const double main = theta(p.h_l * p.h_l * p.P_l / p.N_l);
  const double rl1 = theta(p.P_l * (p.h_1m * p.h_1m / p.N_1e_m + p.h_2m * p.h_2m / p.N_2e_m));
  const double a1 = theta(p.h_1m * p.h_1m * p.P_l / p.N_1e_m + p.h_1c * p.h_1c * p.P_2e / p.N_1e_c +
                          p.h_1m * p.h_1m * p.h_1c * p.h_1c * p.P_l * p.P_2e / (p.N_1e_c * p.N_1e_m));
  const double a2 = theta(p.h_2m * p.h_2m * p.P_l / p.N_2e_m + p.h_2c * p.h_2c * p.P_1e / p.N_2e_c +
                          p.h_2m * p.h_2m * p.h_2c * p.h_2c * p.P_l * p.P_1e / (p.N_2e_c * p.N_2e_m));
  return combine_rates(main, rl1, a1, a2);
}

double rate_noncolluding(const OrthogonalGaussianParams& p) {
  p.validate();
  const double main = theta(p.h_l * p.h_l * p.P_l / p.N_l);
  const double leak = std::max(theta(p.h_1m * p.h_1m * p.P_l / p.N_1e_m),
                               theta(p.h_2m * p.h_2m * p.P_l / p.N_2e_m));
  return std::max(0.0, main - leak);
}

double rate_perfectcolluding(const OrthogonalGaussianParams& p) {
  p.validate();
  const double main = theta(p.h_l * p.h_l * p.P_l / p.N_l);
  const double leak = theta(p.P_l * (p.h_1m * p.h_1m / p.N_1e_m + p.h_2m * p.h_2m / p.N_2e_m));
  return std::max(0.0, main - leak);
}

double leakage_A(int j, const GeneralGaussianParams& p, const CorrelationTriple& rho,
                 CrossTermRho variant) {
  if (j != 1 && j != 2) throw PreconditionError("eavesdropper index must be 1 or 2");
  // Direct gain, gain from the other eavesdropper, and that eavesdropper's power.
  const double h_direct = j == 1 ? p.h_l_1e : p.h_l_2e;
  const double h_cross = j == 1 ? p.h_2e_1e : p.h_1e_2e;
  const double p_other = j == 1 ? p.P_2e : p.P_1e;
  const double noise = j == 1 ? p.N_1e : p.N_2e;
  double r = j == 1 ? rho.rho_2 : rho.rho_1;
  if (variant == CrossTermRho::LiteralRho2) r = rho.rho_2;

  const double snr = (h_direct * h_direct * p.P_l + h_cross * h_cross * p_other +
                      2.0 * h_direct * h_cross * r * std::sqrt(p.P_l * p_other)) /
                     noise;
  if (snr < 0.0) {
    // (h_d sqrt(P_l) - h_c sqrt(P_o))^2 <= numerator for |r| <= 1.
    if (snr > -1e-12 * (h_direct * h_direct * p.P_l + h_cross * h_cross * p_other) / noise) {
      return 0.0;
    }
    throw DomainError("leakage_A: negative SNR argument; correlation out of range");
  }
  return theta(snr);
}

RateBreakdown rate_general_paper(const GeneralGaussianParams& p, const CorrelationTriple& rho,
                                 CrossTermRho variant) {
  ClosedFormEval e = eval_general_closed_form(p, rho, variant);
  if (e.status != ClosedFormStatus::Ok) throw PreconditionError("rate_general_paper: " + e.reason);
  return e.rate;
}

std::optional<RateBreakdown> try_rate_general_paper(const GeneralGaussianParams& p,
                                                    const CorrelationTriple& rho,
                                                    CrossTermRho variant) {
  ClosedFormEval e = eval_general_closed_form(p, rho, variant);
  if (e.status != ClosedFormStatus::Ok) return std::nullopt;
  return e.rate;
}

GeneralGaussianParams without_jamming(GeneralGaussianParams p) {
  p.h_1e_l = 0.0;
  p.h_2e_l = 0.0;
  return p;
}

RateBreakdown rate_nonjamming(const GeneralGaussianParams& p, const CorrelationTriple& rho) {
  return rate_general_paper(without_jamming(p), rho);
}

}  // namespace wtcce
