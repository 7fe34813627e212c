#pragma once

#include <cstddef>
#include <vector>

namespace fgl {

// Parameters of the quadratic generating polynomial q(z) = b0 + b1 z + b2 z^2
// and the fourth-order correction weight eta. For order parameter alpha:
//   b0 = (3a-2)/(2a), b1 = -2(a-1)/a, b2 = (a-2)/(2a), so b0 + b1 + b2 = 0,
//   eta = (3a-2)(a-2)(a-1)/(24a).
struct GenFnParams {
  double alpha;
  double b0;
  double b1;
  double b2;
  double eta;
};

// Evaluates the closed forms above. Throws std::domain_error for alpha < 1.
GenFnParams gen_fn_params(double alpha);

enum class CoeffFamily { G2, G4 };

// kappa_0..kappa_L of a coefficient family at a given order.
struct CoeffTable {
  double alpha = 0.0;
  CoeffFamily family = CoeffFamily::G2;
  std::vector<double> values;
};

// Power-series coefficients of q(z)^exponent with base-alpha q, by the
// three-term recurrence
//   kappa_{n+1} = [b1 (E-n) kappa_n + b2 (2E-n+1) kappa_{n-1}] / (b0 (n+1)),
//   kappa_0 = b0^E, kappa_1 = E b1 b0^{E-1},   E = exponent.
// g2_coeffs uses exponent = alpha (the second-order family).
CoeffTable g2_coeffs(double alpha, std::size_t L);
CoeffTable g2_coeffs_with_exponent(double alpha, double exponent, std::size_t L);

// Direct binomial-sum evaluation of a single coefficient,
//   kappa_n = (-1)^n b0^E sum_k (b2/b0)^k C(E,k) C(E,n-k),
// with generalized binomials done in log-Gamma space (sign-tracked, with the
// reflection formula for nonpositive arguments) and max-shifted summation so
// intermediates never overflow. Serves as the independent oracle for the
// recurrences. If cancellation is non-null it receives sum|terms|/|sum|, a
// conditioning metric; values above 1e8 indicate the returned digits are
// untrustworthy.
double g2_coeff_direct(double alpha, std::size_t n, double* cancellation = nullptr);
double g2_coeff_direct_with_exponent(double alpha, double exponent, std::size_t n,
                                     double* cancellation = nullptr);

// Fourth-order family. Primary construction is the termwise identity
//   kappa_{4,m} = kappa_{2,m}^{(alpha)} + eta * kappa_{2,m}^{(alpha+2)},
// where the exponent-(alpha+2) table keeps the base-alpha b's.
CoeffTable g4_coeffs(double alpha, std::size_t L);

// The published three-term recursion for the same table; retained as an
// independent cross-check route (the two must agree to ~1e-12 relative).
CoeffTable g4_coeffs_recursion(double alpha, std::size_t L);

// Coefficients varrho_m of the expansion
//   e^z z^{-alpha} G4(e^{-z}) = 1 + sum_m varrho_m z^m,
// with varrho1 = varrho3 = 0 and closed forms for varrho2, varrho4.
struct ExpansionCoeffs {
  double varrho1;
  double varrho2;
  double varrho3;
  double varrho4;
};
ExpansionCoeffs expansion_coeffs(double alpha);

// Spectral scalar functions of the symmetrized operator symbol:
//   Z1(E, s) = cos[((s - pi)/2 + theta) E - s],
//   theta = atan(d2/d1), d1 = b0 - b2 cos s, d2 = -b2 sin s  (base-alpha b's),
//   Z = Z1(alpha, s) + 4 eta (d1^2 + d2^2) sin^2(s/2) Z1(alpha+2, s).
// Z <= 0 on (1,2] x [0,pi]; Z1 lies in [-1, cos(pi alpha/2)].
struct SymbolValues {
  double Z1;
  double Z;
};
SymbolValues symbol_functions(double alpha, double s);

}  // namespace fgl
