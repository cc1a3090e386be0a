#pragma once

#include <optional>

namespace wtcce {

// Orthogonal model: the collusion links do not interfere with the main channel.
//   Y_l     = h_l  X_l  + Z_l
//   Y_je^m  = h_jm X_l  + Z_je^m
//   Y_je^c  = h_jc X_j'e + Z_je^c      (j' the other eavesdropper)
struct OrthogonalGaussianParams {
  double h_l = 1.0;
  double h_1m = 1.0;
  double h_2m = 1.0;
  double h_1c = 0.0;
  double h_2c = 0.0;
  double P_l = 1.0;
  double P_1e = 1.0;
  double P_2e = 1.0;
  double N_l = 1.0;
  double N_1e_m = 1.0;
  double N_2e_m = 1.0;
  double N_1e_c = 1.0;
  double N_2e_c = 1.0;

  // Throws PreconditionError on non-finite values, negative powers or
  // non-positive noise powers.
  void validate() const;
};

// General model: eavesdroppers share the medium with the legitimate pair and
// can jam the legitimate receiver. Naming: h_<from>_<to>, with the
// legitimate->legitimate gain just h_l. Self-loops h_1e_1e, h_2e_2e are zero.
struct GeneralGaussianParams {
  double h_l = 1.0;
  double h_1e_l = 0.0;
  double h_2e_l = 0.0;
  double h_l_1e = 1.0;
  double h_l_2e = 1.0;
  double h_2e_1e = 0.0;
  double h_1e_2e = 0.0;
  double P_l = 1.0;
  double P_1e = 1.0;
  double P_2e = 1.0;
  double N_l = 1.0;
  double N_1e = 1.0;
  double N_2e = 1.0;

  void validate() const;
};

// Correlation strategy of the eavesdroppers:
//   rho_1 = corr(X_1e, X_l), rho_2 = corr(X_2e, X_l), rho_12 = corr(X_1e, X_2e).
struct CorrelationTriple {
  double rho_1 = 0.0;
  double rho_2 = 0.0;
  double rho_12 = 0.0;

  friend bool operator==(const CorrelationTriple&, const CorrelationTriple&) = default;
};

// Determinant of [[1, r1, r2], [r1, 1, r12], [r2, r12, 1]].
double correlation_determinant(const CorrelationTriple& rho);

// Box constraint plus PSD of the 3x3 correlation matrix (determinant >= -1e-12).
bool is_valid_correlation(const CorrelationTriple& rho);

// Throws PreconditionError if !is_valid_correlation(rho).
void validate_correlation(const CorrelationTriple& rho);

struct RateBreakdown {
  double main_rate = 0.0;
  double leak_RL1 = 0.0;
  double leak_A1 = 0.0;
  double leak_A2 = 0.0;
  double effective_leakage = 0.0;
  double secure_rate = 0.0;
  bool clamped = false;
};

// Fills effective_leakage = min(RL1, max(A1, A2)), secure_rate and clamped.
RateBreakdown combine_rates(double main_rate, double leak_RL1, double leak_A1, double leak_A2);

// theta(x) = 1/2 log2(1 + x), in bits per channel use. Throws DomainError for
// x < 0 or non-finite x.
double theta(double x);

RateBreakdown rate_orthogonal(const OrthogonalGaussianParams& p);
double rate_noncolluding(const OrthogonalGaussianParams& p);
double rate_perfectcolluding(const OrthogonalGaussianParams& p);

// Which input correlation multiplies the cross term of the per-eavesdropper
// MAC bound A(j). Complement uses rho of the other eavesdropper (rho_2 for
// j = 1, rho_1 for j = 2); LiteralRho2 uses rho_2 for both, as in the literal formula.
enum class CrossTermRho { Complement, LiteralRho2 };

double leakage_A(int j, const GeneralGaussianParams& p, const CorrelationTriple& rho,
                 CrossTermRho variant = CrossTermRho::Complement);

// Closed-form general-model rate at a fixed correlation triple, with the
// literal main-rate and joint-leakage expressions.
//
// The joint-leakage factor divides by P_1e * P_2e * (1 - rho_12^2); this is
// rejected with PreconditionError when zero unless rho_1 = rho_2 = 0, where
// the correction term vanishes identically. Literal SNR arguments that come
// out negative (possible away from rho = 0) are also PreconditionError.
RateBreakdown rate_general_paper(const GeneralGaussianParams& p, const CorrelationTriple& rho,
                                 CrossTermRho variant = CrossTermRho::Complement);

// Same as rate_general_paper, but returns nullopt where the literal
// expression is undefined instead of throwing. Parameter and correlation
// validity violations still throw.
std::optional<RateBreakdown> try_rate_general_paper(
    const GeneralGaussianParams& p, const CorrelationTriple& rho,
    CrossTermRho variant = CrossTermRho::Complement);

// rate_general_paper with the jamming gains h_1e_l, h_2e_l forced to zero.
RateBreakdown rate_nonjamming(const GeneralGaussianParams& p, const CorrelationTriple& rho);

GeneralGaussianParams without_jamming(GeneralGaussianParams p);

}  // namespace wtcce
