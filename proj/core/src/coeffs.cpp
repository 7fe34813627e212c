#include "fgl/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fgl {

GenFnParams gen_fn_params(double alpha) {
  if (!(alpha >= 1.0)) {
    throw std::domain_error("gen_fn_params: alpha must be >= 1");
  }
  GenFnParams p;
  p.alpha = alpha;
  p.b0 = (3.0 * alpha - 2.0) / (2.0 * alpha);
  p.b1 = -2.0 * (alpha - 1.0) / alpha;
  p.b2 = (alpha - 2.0) / (2.0 * alpha);
  p.eta = (3.0 * alpha - 2.0) * (alpha - 2.0) * (alpha - 1.0) / (24.0 * alpha);
  return p;
}

namespace {

std::vector<double> series_coeffs(const GenFnParams& p, double exponent, std::size_t L) {
  std::vector<double> k(L + 1, 0.0);
  const double E = exponent;
  k[0] = std::pow(p.b0, E);
  if (L >= 1) k[1] = E * p.b1 * std::pow(p.b0, E - 1.0);
  for (std::size_t n = 1; n < L; ++n) {
    const double dn = static_cast<double>(n);
    k[n + 1] =
        (p.b1 * (E - dn) * k[n] + p.b2 * (2.0 * E - dn + 1.0) * k[n - 1]) /
        (p.b0 * (dn + 1.0));
  }
  return k;
}

// log|Gamma(x)| with sign, valid for all non-pole x (reflection for x <= 0).
struct SignedLog {
  double ln;    // log of absolute value; -inf encodes an exact zero
  double sign;  // +1 or -1
};

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

SignedLog log_gamma_signed(double x) {
  if (x > 0.0) return {std::lgamma(x), 1.0};
  // Gamma(x) = pi / (sin(pi x) Gamma(1 - x)); at nonpositive integers the
  // pole makes 1/Gamma zero, which callers encode as a zero binomial term.
  const double s = std::sin(M_PI * x);
  if (s == 0.0) return {kNegInf, 1.0};  // pole: |Gamma| = inf; handled by caller
  return {std::log(M_PI) - std::log(std::fabs(s)) - std::lgamma(1.0 - x),
          s > 0.0 ? 1.0 : -1.0};
}

// Generalized binomial C(E, k) = Gamma(E+1) / (Gamma(k+1) Gamma(E-k+1)).
SignedLog log_binom(double E, double k) {
  const double x = E - k + 1.0;
  if (x > 0.0) {
    return {std::lgamma(E + 1.0) - std::lgamma(k + 1.0) - std::lgamma(x), 1.0};
  }
  // x <= 0: when E is a nonnegative integer and k > E the binomial is exactly 0
  // (Gamma pole in the denominator). Otherwise use the reflection formula.
  const SignedLog g = log_gamma_signed(x);
  if (g.ln == kNegInf) return {kNegInf, 1.0};  // denominator pole -> C = 0
  return {std::lgamma(E + 1.0) - std::lgamma(k + 1.0) - g.ln, g.sign};
}

double direct_coeff(const GenFnParams& p, double exponent, std::size_t n,
                    double* cancellation) {
  const double E = exponent;
  const double r = p.b2 / p.b0;  // <= 0 for alpha in [1,2]
  const double ln_abs_r = (r == 0.0) ? kNegInf : std::log(std::fabs(r));

  std::vector<double> ln_terms(n + 1, kNegInf);
  std::vector<double> signs(n + 1, 1.0);
  for (std::size_t k = 0; k <= n; ++k) {
    if (r == 0.0 && k > 0) continue;  // only k = 0 contributes
    const SignedLog ck = log_binom(E, static_cast<double>(k));
    const SignedLog cnk = log_binom(E, static_cast<double>(n - k));
    if (ck.ln == kNegInf || cnk.ln == kNegInf) continue;
    const double ln_rk = (k == 0) ? 0.0 : static_cast<double>(k) * ln_abs_r;
    double sg = ck.sign * cnk.sign;
    if (r < 0.0 && (k % 2 == 1)) sg = -sg;
    ln_terms[k] = ck.ln + cnk.ln + ln_rk;
    signs[k] = sg;
  }

  const double m = *std::max_element(ln_terms.begin(), ln_terms.end());
  if (m == kNegInf) {
    if (cancellation) *cancellation = 1.0;
    return 0.0;
  }
  double sum = 0.0, abs_sum = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    if (ln_terms[k] == kNegInf) continue;
    const double t = std::exp(ln_terms[k] - m);
    sum += signs[k] * t;
    abs_sum += t;
  }
  if (cancellation) {
    *cancellation = (sum == 0.0) ? std::numeric_limits<double>::infinity()
                                 : abs_sum / std::fabs(sum);
  }
  const double parity = (n % 2 == 0) ? 1.0 : -1.0;
  return parity * std::pow(p.b0, E) * sum * std::exp(m);
}

}  // namespace

CoeffTable g2_coeffs_with_exponent(double alpha, double exponent, std::size_t L) {
  if (L < 2) throw std::domain_error("g2_coeffs: L must be >= 2");
  const GenFnParams p = gen_fn_params(alpha);
  CoeffTable t;
  t.alpha = alpha;
  t.family = CoeffFamily::G2;
  t.values = series_coeffs(p, exponent, L);
  return t;
}

CoeffTable g2_coeffs(double alpha, std::size_t L) {
  return g2_coeffs_with_exponent(alpha, alpha, L);
}

double g2_coeff_direct_with_exponent(double alpha, double exponent, std::size_t n,
                                     double* cancellation) {
  const GenFnParams p = gen_fn_params(alpha);
  return direct_coeff(p, exponent, n, cancellation);
}

double g2_coeff_direct(double alpha, std::size_t n, double* cancellation) {
  return g2_coeff_direct_with_exponent(alpha, alpha, n, cancellation);
}

CoeffTable g4_coeffs(double alpha, std::size_t L) {
  if (!(alpha > 1.0 && alpha <= 2.0)) {
    throw std::domain_error("g4_coeffs: alpha must be in (1, 2]");
  }
  if (L < 2) throw std::domain_error("g4_coeffs: L must be >= 2");
  const GenFnParams p = gen_fn_params(alpha);
  const std::vector<double> k2 = series_coeffs(p, alpha, L);
  const std::vector<double> k2p = series_coeffs(p, alpha + 2.0, L);
  CoeffTable t;
  t.alpha = alpha;
  t.family = CoeffFamily::G4;
  t.values.resize(L + 1);
  for (std::size_t m = 0; m <= L; ++m) t.values[m] = k2[m] + p.eta * k2p[m];
  return t;
}

CoeffTable g4_coeffs_recursion(double alpha, std::size_t L) {
  if (!(alpha > 1.0 && alpha <= 2.0)) {
    throw std::domain_error("g4_coeffs_recursion: alpha must be in (1, 2]");
  }
  if (L < 2) throw std::domain_error("g4_coeffs_recursion: L must be >= 2");
  const GenFnParams p = gen_fn_params(alpha);
  const std::vector<double> k2p = series_coeffs(p, alpha + 2.0, L);
  CoeffTable t;
  t.alpha = alpha;
  t.family = CoeffFamily::G4;
  std::vector<double>& k4 = t.values;
  k4.assign(L + 1, 0.0);
  k4[0] = std::pow(p.b0, alpha) * (1.0 + p.eta * p.b0 * p.b0);
  k4[1] = (p.b1 / p.b0) * (alpha * k4[0] + 2.0 * p.eta * k2p[0]);
  for (std::size_t m = 2; m <= L; ++m) {
    const double dm = static_cast<double>(m);
    k4[m] = (p.b1 * (alpha - dm + 1.0) * k4[m - 1] +
             p.b2 * (2.0 * alpha - dm + 2.0) * k4[m - 2] +
             2.0 * p.eta * p.b1 * k2p[m - 1] + 4.0 * p.eta * p.b2 * k2p[m - 2]) /
            (dm * p.b0);
  }
  return t;
}

ExpansionCoeffs expansion_coeffs(double alpha) {
  if (!(alpha > 1.0 && alpha <= 2.0)) {
    throw std::domain_error("expansion_coeffs: alpha must be in (1, 2]");
  }
  ExpansionCoeffs c;
  c.varrho1 = 0.0;
  c.varrho2 = (3.0 * std::pow(alpha, 3) - 19.0 * alpha * alpha + 36.0 * alpha - 16.0) /
              (24.0 * alpha);
  c.varrho3 = 0.0;
  c.varrho4 = -(30.0 * std::pow(alpha, 6) - 180.0 * std::pow(alpha, 5) +
                459.0 * std::pow(alpha, 4) - 835.0 * std::pow(alpha, 3) +
                1210.0 * alpha * alpha - 990.0 * alpha + 300.0) /
              (720.0 * std::pow(alpha, 3));
  return c;
}

SymbolValues symbol_functions(double alpha, double s) {
  if (!(alpha > 1.0 && alpha <= 2.0)) {
    throw std::domain_error("symbol_functions: alpha must be in (1, 2]");
  }
  if (!(s >= 0.0 && s <= M_PI)) {
    throw std::domain_error("symbol_functions: s must be in [0, pi]");
  }
  const GenFnParams p = gen_fn_params(alpha);
  const double d1 = p.b0 - p.b2 * std::cos(s);
  const double d2 = -p.b2 * std::sin(s);
  const double theta = std::atan2(d2, d1);
  const auto z1 = [&](double E) {
    return std::cos(((s - M_PI) / 2.0 + theta) * E - s);
  };
  SymbolValues v;
  v.Z1 = z1(alpha);
  const double sh = std::sin(s / 2.0);
  v.Z = v.Z1 + 4.0 * p.eta * (d1 * d1 + d2 * d2) * sh * sh * z1(alpha + 2.0);
  return v;
}

}  // namespace fgl
