#include "fgl/operators.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "fgl/coeffs.hpp"
#include "fgl/harness.hpp"
#include "fgl/norms.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

fgl::VecC random_vec(fgl::Rng& rng, int n) {
  fgl::VecC u(n);
  for (int j = 0; j < n; ++j) u[j] = rng.cnormal();
  return u;
}

TEST(Grid1D, BasicLayout) {
  const fgl::Grid1D g = fgl::Grid1D::make(-1.0, 1.0, 10);
  EXPECT_EQ(g.nx, 10);
  EXPECT_EQ(g.interior(), 9);
  EXPECT_DOUBLE_EQ(g.h, 0.2);
  EXPECT_THROW(fgl::Grid1D::make(1.0, -1.0, 10), std::domain_error);
  EXPECT_THROW(fgl::Grid1D::make(0.0, 1.0, 2), std::domain_error);
}

TEST(DiscreteOperator, ClassicalLimitIsExactSecondDifference) {
  const fgl::Grid1D g = fgl::Grid1D::make(0.0, 1.0, 32);
  const fgl::DiscreteOperator op = fgl::DiscreteOperator::assemble(2.0, g);
  const double h2 = g.h * g.h;
  EXPECT_EQ(op.varrho2(), 1.0 / 12.0);
  EXPECT_NEAR(op.b_first_column()[0], -2.0 / h2, 1e-12 / h2);
  EXPECT_NEAR(op.b_first_column()[1], 1.0 / h2, 1e-12 / h2);
  for (int d = 2; d < g.interior(); ++d)
    EXPECT_NEAR(op.b_first_column()[d], 0.0, 1e-12 / h2) << d;
}

TEST(DiscreteOperator, WeightMatrixEigenvaluesMatchClosedForm) {
  fgl::Rng rng(7);
  for (const int nx : {16, 64}) {
    const double a = 1.001 + 0.999 * rng.uniform();
    const fgl::Grid1D g = fgl::Grid1D::make(0.0, 1.0, nx);
    const fgl::DiscreteOperator op = fgl::DiscreteOperator::assemble(a, g);
    const int n = g.interior();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      A(i, i) = 1.0 - 2.0 * op.varrho2();
      if (i > 0) A(i, i - 1) = op.varrho2();
      if (i + 1 < n) A(i, i + 1) = op.varrho2();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    std::vector<double> closed;
    for (int j = 1; j <= n; ++j) {
      const double s = std::sin(j * kPi / (2.0 * nx));
      closed.push_back(1.0 - 4.0 * op.varrho2() * s * s);
    }
    std::sort(closed.begin(), closed.end());
    for (int j = 0; j < n; ++j)
      EXPECT_NEAR(es.eigenvalues()[j], closed[j], 1e-10) << "nx=" << nx;
  }
}

TEST(DiscreteOperator, ToeplitzSpectrumNonpositive) {
  const fgl::Grid1D g = fgl::Grid1D::make(-1.0, 1.0, 64);
  for (const double a : {1.2, 1.7, 2.0}) {
    const fgl::DiscreteOperator op = fgl::DiscreteOperator::assemble(a, g);
    const int n = g.interior();
    Eigen::MatrixXd B(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) B(i, j) = op.b_first_column()[std::abs(i - j)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B, Eigen::EigenvaluesOnly);
    EXPECT_LE(es.eigenvalues().maxCoeff(), 1e-10) << "alpha=" << a;
  }
}

TEST(DiscreteOperator, FastMatvecMatchesDirectSummation) {
  fgl::Rng rng(11);
  const fgl::Grid1D g = fgl::Grid1D::make(0.0, 2.0, 257);
  for (const double a : {1.35, 2.0}) {
    const fgl::DiscreteOperator op = fgl::DiscreteOperator::assemble(a, g);
    const fgl::VecC u = random_vec(rng, g.interior());
    const fgl::VecC fast = op.apply_B(u);
    const fgl::VecC direct = op.apply_B_direct(u);
    const double rel = (fast - direct).lpNorm<Eigen::Infinity>() /
                       direct.lpNorm<Eigen::Infinity>();
    EXPECT_LE(rel, 1e-12) << "alpha=" << a;
  }
}

TEST(DiscreteOperator, TridiagonalSolveInvertsApply) {
  fgl::Rng rng(13);
  const fgl::Grid1D g = fgl::Grid1D::make(0.0, 1.0, 100);
  const fgl::DiscreteOperator op = fgl::DiscreteOperator::assemble(1.8, g);
  const fgl::VecC u = random_vec(rng, g.interior());
  const fgl::VecC back = op.apply_A(op.solve_A(u));
  EXPECT_LE((back - u).lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(DiscreteOperator, LaplacianSatisfiesDefiningSystem) {
  fgl::Rng rng(17);
  const fgl::Grid1D g = fgl::Grid1D::make(0.0, 1.0, 128);
  const fgl::DiscreteOperator op = fgl::DiscreteOperator::assemble(1.6, g);
  const fgl::VecC u = random_vec(rng, g.interior());
  const fgl::VecC y = op.frac_laplacian(u);
  const fgl::VecC resid = op.apply_A(y) + op.apply_B(u);
  EXPECT_LE(resid.lpNorm<Eigen::Infinity>(),
            1e-12 * op.apply_B(u).lpNorm<Eigen::Infinity>());
}

TEST(DiscreteOperator, RawMatvecIsSecondOrderOnSineAtClassicalOrder) {
  // B alone approximates the second derivative to O(h^2); the fourth order
  // of the full formula comes from the tridiagonal averaging on the left.
  double errs[2];
  int k = 0;
  for (const int nx : {64, 128}) {
    const fgl::Grid1D g = fgl::Grid1D::make(0.0, 1.0, nx);
    const fgl::DiscreteOperator op = fgl::DiscreteOperator::assemble(2.0, g);
    fgl::VecC u(g.interior());
    for (int j = 1; j < nx; ++j) u[j - 1] = std::sin(kPi * (g.a + j * g.h));
    const fgl::VecC y = op.apply_B(u);
    double emax = 0.0;
    for (int j = 0; j < g.interior(); ++j)
      emax = std::max(emax, std::abs(y[j] - (-kPi * kPi * u[j])));
    errs[k++] = emax;
  }
  const double order = std::log(errs[0] / errs[1]) / std::log(2.0);
  EXPECT_NEAR(order, 2.0, 0.1);
}

TEST(DiscreteOperator, CompactFormulaIsFourthOrderOnSmoothCompactField) {
  const fgl::PolyOracle oracle = fgl::example1_poly(1.5);
  double errs[2];
  int k = 0;
  for (const int nx : {40, 80}) {
    const fgl::Grid1D g = fgl::Grid1D::make(oracle.a, oracle.b, nx);
    const fgl::DiscreteOperator op = fgl::DiscreteOperator::assemble(1.5, g);
    fgl::VecC u(g.interior());
    for (int j = 1; j < nx; ++j)
      u[j - 1] = fgl::poly_value(oracle, g.a + j * g.h);
    const fgl::VecC y = op.frac_laplacian(u);
    const int mid = nx / 2;  // x = 0.5
    errs[k++] = std::abs(y[mid - 1] -
                         fgl::poly_exact_frac_laplacian(oracle, 0.5));
  }
  const double order = std::log(errs[0] / errs[1]) / std::log(2.0);
  EXPECT_GE(order, 3.7);
  EXPECT_LE(order, 4.3);
}

TEST(PolyOracle, ValuesAndEndpointBehavior) {
  const fgl::PolyOracle oracle = fgl::example1_poly(1.6);
  EXPECT_NEAR(fgl::poly_value(oracle, 0.5), 1.0 / 256.0, 1e-16);
  EXPECT_NEAR(fgl::poly_value(oracle, 0.0), 0.0, 1e-300);
  EXPECT_NEAR(fgl::poly_value(oracle, 1.0), 0.0, 1e-18);
  // Frozen oracle value, cross-checked against series and quadrature routes.
  EXPECT_NEAR(fgl::poly_exact_frac_laplacian(oracle, 0.5),
              0.05623881929559304, 1e-12);
  EXPECT_THROW(fgl::poly_exact_frac_laplacian(oracle, 1.5), std::domain_error);
}

TEST(DiscreteOperator, QuadraticFormSandwichedByEnergyBounds) {
  // h <A^{-1}B u, u> / |u|^2_{H^{a/2}} must lie between the two closed-form
  // constants (both negative; the discrete operator is dissipative).
  fgl::Rng rng(23);
  const fgl::Grid1D g = fgl::Grid1D::make(-1.0, 1.0, 128);
  for (const double a : {1.3, 1.7}) {
    const fgl::DiscreteOperator op = fgl::DiscreteOperator::assemble(a, g);
    const fgl::GenFnParams gp = fgl::gen_fn_params(a);
    const double c = std::cos(kPi * a / 2.0);
    const double C1 = std::pow(gp.b0 + gp.b2, a) * (4.0 * gp.eta - c) /
                      (2.0 * c) * std::pow(2.0 / kPi, a);
    const double C2 = std::pow(gp.b0 - gp.b2, a) *
                      (a * a - 16.0 * gp.eta * (a - 1.0) * (a - 1.0)) /
                      (2.0 * a * a * c * (1.0 - 4.0 * op.varrho2()));
    for (int t = 0; t < 8; ++t) {
      fgl::VecR ur(g.interior());
      for (int j = 0; j < g.interior(); ++j) ur[j] = rng.normal();
      const fgl::VecC u = ur.cast<std::complex<double>>();
      const fgl::VecC q = -op.frac_laplacian(u);
      const double form = g.h * ur.dot(q.real());
      const double semi = fgl::frac_seminorm(u, g.h, a / 2.0);
      const double ratio = form / (semi * semi);
      EXPECT_GE(ratio, 2.0 * C2 - 1e-12) << "alpha=" << a;
      EXPECT_LE(ratio, 2.0 * C1 + 1e-12) << "alpha=" << a;
    }
  }
}

TEST(DiscreteOperator, InputValidation) {
  const fgl::Grid1D g = fgl::Grid1D::make(0.0, 1.0, 16);
  EXPECT_THROW(fgl::DiscreteOperator::assemble(1.0, g), std::domain_error);
  EXPECT_THROW(fgl::DiscreteOperator::assemble(2.2, g), std::domain_error);
  const fgl::DiscreteOperator op = fgl::DiscreteOperator::assemble(1.5, g);
  fgl::VecC wrong(7);
  wrong.setZero();
  EXPECT_THROW(op.apply_B(wrong), std::invalid_argument);
  EXPECT_THROW(op.apply_A(wrong), std::invalid_argument);
  EXPECT_THROW(op.solve_A(wrong), std::invalid_argument);
}

}  // namespace
