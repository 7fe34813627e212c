#include "fgl/coeffs.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fgl/harness.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

TEST(GenFnParams, ClosedForms) {
  for (const double a : {1.1, 1.5, 1.85, 2.0}) {
    const fgl::GenFnParams g = fgl::gen_fn_params(a);
    EXPECT_DOUBLE_EQ(g.b0, (3 * a - 2) / (2 * a));
    EXPECT_DOUBLE_EQ(g.b1, -2 * (a - 1) / a);
    EXPECT_DOUBLE_EQ(g.b2, (a - 2) / (2 * a));
    EXPECT_DOUBLE_EQ(g.eta, (3 * a - 2) * (a - 2) * (a - 1) / (24 * a));
  }
  // At a = 2 the shifted generating function collapses to the plain one.
  const fgl::GenFnParams g2 = fgl::gen_fn_params(2.0);
  EXPECT_EQ(g2.b0, 1.0);
  EXPECT_EQ(g2.b1, -1.0);
  EXPECT_EQ(g2.b2, 0.0);
  EXPECT_EQ(g2.eta, 0.0);
  EXPECT_THROW(fgl::gen_fn_params(0.5), std::domain_error);
}

TEST(G2Coeffs, FirstTwoMatchClosedForm) {
  for (const double a : {1.2, 1.5, 1.9, 2.0}) {
    const fgl::GenFnParams g = fgl::gen_fn_params(a);
    const fgl::CoeffTable t = fgl::g2_coeffs(a, 4);
    EXPECT_NEAR(t.values[0], std::pow(g.b0, a), 1e-15 * std::abs(t.values[0]));
    EXPECT_NEAR(t.values[1], a * g.b1 * std::pow(g.b0, a - 1.0),
                1e-14 * std::abs(t.values[1]));
  }
}

TEST(G2Coeffs, FrozenValuesAtAlpha15) {
  // Regression pin: first six weights at alpha = 1.5, independently
  // cross-checked against the binomial-sum route at generation time.
  const double expected[6] = {7.6072577431273081e-01, -9.1287092917527690e-01,
                              -4.5643546458763860e-02, 1.1563031769553507e-01,
                              3.6971272631598717e-02, 1.4788509052639485e-02};
  const fgl::CoeffTable t = fgl::g2_coeffs(1.5, 5);
  ASSERT_EQ(t.values.size(), 6u);
  for (int i = 0; i < 6; ++i)
    EXPECT_NEAR(t.values[i], expected[i], 1e-14 * std::abs(expected[i])) << i;
}

TEST(G2Coeffs, RecursionMatchesDirectSum) {
  fgl::Rng rng(101);
  for (int t = 0; t < 10; ++t) {
    const double a = 1.001 + 0.999 * rng.uniform();
    const fgl::CoeffTable rec = fgl::g2_coeffs(a, 500);
    for (const std::size_t n : {0, 1, 3, 10, 40, 150, 500}) {
      const double d = fgl::g2_coeff_direct(a, n);
      // Tolerance floored at 1e-12 absolute: the coefficients collapse toward
      // zero as alpha -> 1 while the direct sum keeps O(1) cancellation noise.
      EXPECT_NEAR(rec.values[n], d, 1e-12 * std::max(1.0, std::abs(d)))
          << "alpha=" << a << " n=" << n;
    }
  }
}

TEST(G2Coeffs, DirectSumReportsCancellation) {
  double canc = -1.0;
  const double v = fgl::g2_coeff_direct(1.5, 1000, &canc);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_GE(canc, 1.0);  // sum of |terms| over |sum| is at least 1
}

TEST(G4Coeffs, IdentityRouteMatchesRecursionRoute) {
  fgl::Rng rng(202);
  for (int t = 0; t < 6; ++t) {
    const double a = 1.001 + 0.999 * rng.uniform();
    const fgl::CoeffTable x = fgl::g4_coeffs(a, 300);
    const fgl::CoeffTable y = fgl::g4_coeffs_recursion(a, 300);
    for (std::size_t m = 0; m < x.values.size(); ++m) {
      const double scale =
          std::max({std::abs(x.values[m]), std::abs(y.values[m]), 1e-300});
      EXPECT_NEAR(x.values[m], y.values[m], 1e-12 * scale)
          << "alpha=" << a << " m=" << m;
    }
  }
}

TEST(G2Coeffs, AsymptoticDecayConstant) {
  // kappa_n ~ -sin(pi a) Gamma(a+1) / pi * n^{-a-1}; the magnitude of the
  // normalized ratio must approach 1 (sign conventions differ by -1).
  for (const double a : {1.25, 1.75}) {
    const std::size_t n = 100000;
    const fgl::CoeffTable t = fgl::g2_coeffs(a, n);
    const double ratio = t.values[n] * std::pow(double(n), a + 1.0) * kPi /
                         (std::sin(kPi * a) * std::tgamma(a + 1.0));
    EXPECT_GT(std::abs(ratio), 0.95) << "alpha=" << a;
    EXPECT_LT(std::abs(ratio), 1.05) << "alpha=" << a;
  }
}

TEST(G2Coeffs, PartialSumsDecayLikeNToMinusAlpha) {
  const double a = 1.5;
  const fgl::CoeffTable t = fgl::g2_coeffs(a, 10000);
  double p100 = 0.0, p10000 = 0.0;
  for (std::size_t n = 0; n <= 100; ++n) p100 += t.values[n];
  for (std::size_t n = 0; n <= 10000; ++n) p10000 += t.values[n];
  const double slope = std::log(std::abs(p10000) / std::abs(p100)) /
                       std::log(10000.0 / 100.0);
  EXPECT_NEAR(slope, -a, 0.15);
}

TEST(ExpansionCoeffs, ClosedFormsAndClassicalValues) {
  for (const double a : {1.15, 1.5, 1.95}) {
    const fgl::ExpansionCoeffs e = fgl::expansion_coeffs(a);
    EXPECT_EQ(e.varrho1, 0.0);
    EXPECT_EQ(e.varrho3, 0.0);
    EXPECT_NEAR(e.varrho2,
                (3 * a * a * a - 19 * a * a + 36 * a - 16) / (24 * a),
                1e-15);
    const double a3 = a * a * a;
    EXPECT_NEAR(e.varrho4,
                -(30 * a3 * a3 - 180 * a3 * a * a + 459 * a3 * a -
                  835 * a3 + 1210 * a * a - 990 * a + 300) /
                    (720 * a3),
                1e-14);
  }
  const fgl::ExpansionCoeffs e2 = fgl::expansion_coeffs(2.0);
  EXPECT_DOUBLE_EQ(e2.varrho2, 1.0 / 12.0);
  EXPECT_DOUBLE_EQ(e2.varrho4, 1.0 / 360.0);
}

TEST(ExpansionCoeffs, RemainderCollapsesAtDocumentedRates) {
  // Subtracting the varrho2 term must leave a fourth-order remainder in z;
  // subtracting varrho4 as well leaves fifth order (sixth at alpha = 2,
  // fitted on larger z where the remainder clears the rounding floor).
  const std::size_t L = 60000;
  for (const double a : {1.5, 2.0}) {
    const fgl::CoeffTable t = fgl::g4_coeffs(a, L);
    const fgl::ExpansionCoeffs ec = fgl::expansion_coeffs(a);
    auto remainder_slope = [&](double z0, bool stage4) {
      double lx[4], ly[4];
      for (int i = 0; i < 4; ++i) {
        const double z = std::pow(10.0, z0 - 0.2 * i);
        double s = 0.0;
        for (std::size_t m = 0; m <= L; ++m)
          s += t.values[m] * std::exp(-double(m) * z);
        const double F = std::exp(z) * std::pow(z, -a) * s;
        double rem = F - 1.0 - ec.varrho2 * z * z;
        if (stage4) rem -= ec.varrho4 * z * z * z * z;
        lx[i] = std::log(z);
        ly[i] = std::log(std::abs(rem));
      }
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (int i = 0; i < 4; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
      }
      return (4 * sxy - sx * sy) / (4 * sxx - sx * sx);
    };
    EXPECT_GE(remainder_slope(-1.0, false), 3.7) << "alpha=" << a;
    if (a == 2.0)
      EXPECT_GE(remainder_slope(-0.5, true), 5.7);
    else
      EXPECT_GE(remainder_slope(-1.0, true), 4.7) << "alpha=" << a;
  }
}

TEST(Symbols, NonpositiveAndBounded) {
  for (int i = 0; i < 50; ++i) {
    const double a = 1.0 + (i + 1) * (1.0 / 50.0);
    const double cap = std::cos(kPi * a / 2.0);
    for (int j = 0; j < 50; ++j) {
      const double s = j * kPi / 49.0;
      const fgl::SymbolValues v = fgl::symbol_functions(a, s);
      EXPECT_LE(v.Z, 1e-12) << "alpha=" << a << " s=" << s;
      EXPECT_GE(v.Z1, -1.0 - 1e-12);
      EXPECT_LE(v.Z1, cap + 1e-12);
    }
  }
  EXPECT_THROW(fgl::symbol_functions(1.5, -0.1), std::domain_error);
  EXPECT_THROW(fgl::symbol_functions(1.5, kPi + 0.1), std::domain_error);
}

TEST(Symbols, EndpointValues) {
  // At s = 0 the correction term carries sin^2(s/2) = 0, so Z collapses to
  // Z1(alpha, 0) = cos(pi alpha / 2), the upper end of Z1's admissible range.
  // At s = pi, order 2, Z1 attains its most negative admissible value.
  const fgl::SymbolValues at0 = fgl::symbol_functions(1.5, 0.0);
  EXPECT_NEAR(at0.Z1, std::cos(kPi * 1.5 / 2.0), 1e-14);
  EXPECT_NEAR(at0.Z, at0.Z1, 1e-14);
  const fgl::SymbolValues atPi = fgl::symbol_functions(2.0, kPi);
  EXPECT_NEAR(atPi.Z1, -1.0, 1e-14);
}

TEST(Coeffs, DomainErrors) {
  EXPECT_THROW(fgl::g2_coeffs(1.5, 1), std::domain_error);
  EXPECT_THROW(fgl::g4_coeffs(2.5, 10), std::domain_error);
  EXPECT_THROW(fgl::g4_coeffs(1.0, 10), std::domain_error);
  EXPECT_THROW(fgl::g4_coeffs_recursion(0.9, 10), std::domain_error);
  EXPECT_THROW(fgl::expansion_coeffs(2.1), std::domain_error);
}

}  // namespace
