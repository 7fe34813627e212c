#include "fgl/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "fgl/harness.hpp"
#include "fgl/operators.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

TEST(ModelParams, ValidateCollectsEveryViolation) {
  fgl::ModelParams p;
  p.alpha = 2.5;
  p.T = -1.0;
  p.b = p.a;  // empty domain
  try {
    p.validate();
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("alpha"), std::string::npos);
    EXPECT_NE(msg.find("T"), std::string::npos);
    EXPECT_NE(msg.find("b"), std::string::npos);
  }
}

TEST(ModelParams, TestModeLiftsPositivityRequirements) {
  fgl::ModelParams p;
  p.alpha = 1.5;  // all dissipation/coupling coefficients stay at zero
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p.test_mode = true;
  EXPECT_NO_THROW(p.validate());
}

TEST(Solver, LinearModeIsExactPerStep) {
  // With beta = eta = mu = zeta = 0 and V = 0, each full step multiplies U by
  // (2 + tau gamma1) / (2 - tau gamma1) exactly.
  fgl::ModelParams p;
  p.test_mode = true;
  p.alpha = 1.5;
  p.gamma1 = 2.0 / 23.0;
  p.gamma2 = -0.4;
  p.a = 0.0;
  p.b = 1.0;
  p.T = 1.0;
  const fgl::Grid1D g = fgl::Grid1D::make(0.0, 1.0, 24);
  const int nt = 100;
  const double tau = p.T / nt;
  const double rho = (2.0 + tau * p.gamma1) / (2.0 - tau * p.gamma1);
  auto u0 = [](double x) {
    return std::complex<double>(std::sin(kPi * x), 0.5 * std::sin(2 * kPi * x));
  };
  auto zero = [](double) { return std::complex<double>(0.0, 0.0); };
  const fgl::FieldPair init = fgl::init_fields(g, u0, zero);
  double worst = 0.0;
  auto cb = [&](int k, const fgl::FieldPair& f) {
    if (k == 0) return;
    const double factor = std::pow(rho, k);
    worst = std::max(worst, (f.U - factor * init.U).lpNorm<Eigen::Infinity>() /
                                (factor * init.U.lpNorm<Eigen::Infinity>()));
  };
  const fgl::RunResult r = fgl::run(p, g, u0, zero, nt, cb);
  EXPECT_LE(worst, 1e-12);
  EXPECT_LE(r.final.V.lpNorm<Eigen::Infinity>(), 0.0);
}

TEST(Solver, ZeroFieldStaysZero) {
  const fgl::ModelParams p = fgl::table2_params(1.6);
  const fgl::Grid1D g = fgl::Grid1D::make(p.a, p.b, 20);
  auto zero = [](double) { return std::complex<double>(0.0, 0.0); };
  const fgl::RunResult r = fgl::run(p, g, zero, zero, 10);
  EXPECT_EQ(r.final.U.lpNorm<Eigen::Infinity>(), 0.0);
  EXPECT_EQ(r.final.V.lpNorm<Eigen::Infinity>(), 0.0);
  for (const auto& e : r.energy) EXPECT_EQ(e.W, 0.0);
}

TEST(StepMatrices, DenseAndIterativePathsAgree) {
  fgl::Rng rng(31);
  const fgl::ModelParams p = fgl::table2_params(1.4);
  const fgl::Grid1D g = fgl::Grid1D::make(p.a, p.b, 96);
  const fgl::DiscreteOperator op = fgl::DiscreteOperator::assemble(p.alpha, g);
  const fgl::StepMatrices dense(op, p, 0.05, 1 << 20);
  const fgl::StepMatrices iter(op, p, 0.05, 0);
  fgl::VecC rhs(g.interior());
  for (int j = 0; j < g.interior(); ++j) rhs[j] = rng.cnormal();
  const fgl::VecC xd = dense.solve_M1(rhs);
  const fgl::VecC xi = iter.solve_M1(rhs);
  EXPECT_LE((xd - xi).lpNorm<Eigen::Infinity>(),
            1e-10 * xd.lpNorm<Eigen::Infinity>());
  const fgl::VecC yd = dense.solve_M2(rhs);
  const fgl::VecC yi = iter.solve_M2(rhs);
  EXPECT_LE((yd - yi).lpNorm<Eigen::Infinity>(),
            1e-10 * yd.lpNorm<Eigen::Infinity>());
}

TEST(Solver, FixedPointReportsConvergence) {
  const fgl::ModelParams p = fgl::table3_params(1.5);
  const fgl::Grid1D g = fgl::Grid1D::make(p.a, p.b, 10);
  const fgl::RunResult r =
      fgl::run(p, g, fgl::example2_initial, fgl::example2_initial, 5);
  ASSERT_EQ(r.reports.size(), 5u);
  for (const auto& rep : r.reports) {
    EXPECT_TRUE(rep.converged);
    EXPECT_LE(rep.iterations, 50);
    EXPECT_LE(rep.final_update, 1e-14);
  }
}

TEST(Solver, NonConvergenceCarriesReport) {
  const fgl::ModelParams p = fgl::table3_params(1.5);
  const fgl::Grid1D g = fgl::Grid1D::make(p.a, p.b, 10);
  try {
    fgl::run(p, g, fgl::example2_initial, fgl::example2_initial, 5, {}, 1e-14,
             /*max_iter=*/1);
    FAIL() << "expected NonConvergenceError";
  } catch (const fgl::NonConvergenceError& e) {
    EXPECT_FALSE(e.report.converged);
    EXPECT_EQ(e.report.iterations, 1);
    EXPECT_GT(e.report.final_update, 1e-14);
  }
}

TEST(Solver, StepDoublingShowsSecondOrderLocalDefect) {
  // One step of size tau versus two of tau/2 from the same state differ by
  // O(tau^3) locally, so the log-log slope across tau is close to 3.
  const fgl::ModelParams base = fgl::table2_params(1.4);
  const fgl::Grid1D g = fgl::Grid1D::make(base.a, base.b, 20);
  std::vector<double> taus = {1.0 / 10, 1.0 / 20, 1.0 / 40, 1.0 / 80}, ds;
  for (const double tau : taus) {
    fgl::ModelParams p = base;
    p.T = tau;
    const auto r1 = fgl::run(p, g, fgl::example2_initial, fgl::example2_initial, 1);
    const auto r2 = fgl::run(p, g, fgl::example2_initial, fgl::example2_initial, 2);
    ds.push_back(std::sqrt(g.h) * std::max((r1.final.U - r2.final.U).norm(),
                                           (r1.final.V - r2.final.V).norm()));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double lx = std::log(taus[i]), ly = std::log(ds[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double slope = (4 * sxy - sx * sy) / (4 * sxx - sx * sx);
  EXPECT_NEAR(slope, 3.0, 0.3);
}

TEST(Solver, RerunsAreBitIdentical) {
  const fgl::ModelParams p = fgl::table2_params(1.7);
  const fgl::Grid1D g = fgl::Grid1D::make(p.a, p.b, 16);
  const auto r1 = fgl::run(p, g, fgl::example2_initial, fgl::example2_initial, 20);
  const auto r2 = fgl::run(p, g, fgl::example2_initial, fgl::example2_initial, 20);
  EXPECT_EQ((r1.final.U - r2.final.U).lpNorm<Eigen::Infinity>(), 0.0);
  EXPECT_EQ((r1.final.V - r2.final.V).lpNorm<Eigen::Infinity>(), 0.0);
}

TEST(Solver, CallbackSeesEveryLevelWithConsistentClock) {
  const fgl::ModelParams p = fgl::table2_params(1.5);
  const fgl::Grid1D g = fgl::Grid1D::make(p.a, p.b, 12);
  int count = 0;
  auto cb = [&](int k, const fgl::FieldPair& f) {
    EXPECT_EQ(k, count);
    EXPECT_NEAR(f.t, k * (p.T / 8), 1e-14);
    ++count;
  };
  fgl::run(p, g, fgl::example2_initial, fgl::example2_initial, 8, cb);
  EXPECT_EQ(count, 9);
}

TEST(Solver, EnergyFunctionalHandValue) {
  fgl::FieldPair f;
  f.U = fgl::VecC::Constant(4, std::complex<double>(1.0, 1.0));  // |.|^2 = 2
  f.V = fgl::VecC::Zero(4);
  EXPECT_DOUBLE_EQ(fgl::energy(f, 0.25), 0.25 * 8.0);
}

TEST(Solver, GridEndpointMismatchIsRejected) {
  const fgl::ModelParams p = fgl::table2_params(1.5);
  const fgl::Grid1D g = fgl::Grid1D::make(0.0, 1.0, 16);  // params say [-1, 1]
  EXPECT_THROW(
      fgl::run(p, g, fgl::example2_initial, fgl::example2_initial, 4),
      std::invalid_argument);
}

TEST(Solver, EnergyStaysWithinGrowthBound) {
  for (const double alpha : {1.2, 2.0}) {
    const fgl::ModelParams p = fgl::table2_params(alpha);
    const double bound =
        std::exp(4.0 * std::max(std::abs(p.gamma1), std::abs(p.gamma2)) * p.T);
    const fgl::Grid1D g = fgl::Grid1D::make(p.a, p.b, 10);
    const auto r = fgl::run(p, g, fgl::example2_initial, fgl::example2_initial, 5);
    const double w0 = r.energy.front().W;
    for (const auto& e : r.energy) EXPECT_LE(e.W, bound * w0 * (1 + 1e-12));
  }
}

}  // namespace
