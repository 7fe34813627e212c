#include "fgl/solver.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <utility>

#include "fft_util.hpp"

namespace fgl {

namespace {

using Cplx = std::complex<double>;

// Nonlinear right-hand sides:
//   n1 = -(mu1 + i zeta1)|U|^2 U + i |U|^2 V
//   n2 = -(mu2 + i zeta2)|V|^2 V + i |V|^2 U
std::pair<VecC, VecC> nonlinear(const ModelParams& p, const VecC& U, const VecC& V) {
  const Cplx d1(p.mu1, p.zeta1), d2(p.mu2, p.zeta2);
  const Cplx I(0.0, 1.0);
  const auto n = U.size();
  VecC n1(n), n2(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double au = std::norm(U[j]);
    const double av = std::norm(V[j]);
    n1[j] = -d1 * (au * U[j]) + I * (au * V[j]);
    n2[j] = -d2 * (av * V[j]) + I * (av * U[j]);
  }
  return {std::move(n1), std::move(n2)};
}

}  // namespace

void ModelParams::validate() const {
  std::vector<std::string> bad;
  const std::pair<const char*, double> fields[] = {
      {"alpha", alpha}, {"beta1", beta1},   {"beta2", beta2},   {"eta1", eta1},
      {"eta2", eta2},   {"mu1", mu1},       {"mu2", mu2},       {"zeta1", zeta1},
      {"zeta2", zeta2}, {"gamma1", gamma1}, {"gamma2", gamma2}, {"a", a},
      {"b", b},         {"T", T}};
  for (const auto& [name, value] : fields) {
    if (!std::isfinite(value)) bad.push_back(std::string(name) + " is not finite");
  }
  if (!(alpha > 1.0 && alpha <= 2.0)) bad.emplace_back("alpha must lie in (1, 2]");
  if (!(b > a)) bad.emplace_back("domain requires b > a");
  if (!(T > 0.0)) bad.emplace_back("final time T must be positive");
  if (!test_mode) {
    if (!(beta1 > 0.0 && beta2 > 0.0))
      bad.emplace_back("beta1, beta2 must be positive (set test_mode to lift)");
    if (!(eta1 > 0.0 && eta2 > 0.0))
      bad.emplace_back("eta1, eta2 must be positive (set test_mode to lift)");
    if (!(zeta1 > 0.0 && zeta2 > 0.0))
      bad.emplace_back("zeta1, zeta2 must be positive (set test_mode to lift)");
    if (!(mu1 >= 0.0 && mu2 >= 0.0))
      bad.emplace_back("mu1, mu2 must be nonnegative (set test_mode to lift)");
  }
  if (!bad.empty()) {
    std::ostringstream msg;
    msg << "invalid model parameters: ";
    for (size_t i = 0; i < bad.size(); ++i) {
      if (i) msg << "; ";
      msg << bad[i];
    }
    throw std::invalid_argument(msg.str());
  }
}

StepMatrices::StepMatrices(const DiscreteOperator& op, const ModelParams& p,
                           double tau, int dense_limit)
    : op_(&op), tau_(tau) {
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw std::invalid_argument("step size must be positive and finite");
  const int n = op.grid().interior();
  c1_ = Cplx(p.beta1, p.eta1);
  c2_ = Cplx(p.beta2, p.eta2);
  g1_ = p.gamma1;
  g2_ = p.gamma2;
  dense_ = n <= dense_limit;
  const double w = op.varrho2();
  const VecR& bcol = op.b_first_column();
  if (dense_) {
    auto build = [&](Cplx c, double g) {
      Eigen::MatrixXcd M(n, n);
      const double s = 1.0 - 0.5 * tau * g;
      const Cplx f = -0.5 * tau * c;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) M(i, j) = f * bcol[std::abs(i - j)];
        M(i, i) += s * (1.0 - 2.0 * w);
        if (i > 0) M(i, i - 1) += s * w;
        if (i + 1 < n) M(i, i + 1) += s * w;
      }
      return M;
    };
    lu1_.compute(build(c1_, g1_));
    lu2_.compute(build(c2_, g2_));
  } else {
    fft_fwd_ = std::make_unique<detail::FftPlan>(n, FFTW_FORWARD);
    fft_bwd_ = std::make_unique<detail::FftPlan>(n, FFTW_BACKWARD);
    auto spectrum = [&](Cplx c, double g) {
      const double s = 1.0 - 0.5 * tau * g;
      const Cplx f = -0.5 * tau * c;
      // First column of the symmetric Toeplitz step matrix.
      std::vector<Cplx> m(static_cast<size_t>(n));
      for (int d = 0; d < n; ++d) m[d] = f * bcol[d];
      m[0] += s * (1.0 - 2.0 * w);
      if (n > 1) m[1] += s * w;
      // Nearest circulant (wrap the far half of the column), then its spectrum.
      std::vector<Cplx> circ(static_cast<size_t>(n));
      circ[0] = m[0];
      for (int k = 1; k < n; ++k) circ[k] = (2 * k <= n) ? m[k] : m[n - k];
      fft_fwd_->execute(circ.data());
      return circ;
    };
    prec1_ = spectrum(c1_, g1_);
    prec2_ = spectrum(c2_, g2_);
  }
}

StepMatrices::~StepMatrices() = default;
StepMatrices::StepMatrices(StepMatrices&&) noexcept = default;
StepMatrices& StepMatrices::operator=(StepMatrices&&) noexcept = default;

VecC StepMatrices::solve_M1(const VecC& rhs) const {
  if (rhs.size() != op_->grid().interior())
    throw std::invalid_argument("solve_M1: length mismatch");
  return dense_ ? VecC(lu1_.solve(rhs)) : solve_iterative(1, rhs);
}

VecC StepMatrices::solve_M2(const VecC& rhs) const {
  if (rhs.size() != op_->grid().interior())
    throw std::invalid_argument("solve_M2: length mismatch");
  return dense_ ? VecC(lu2_.solve(rhs)) : solve_iterative(2, rhs);
}

VecC StepMatrices::solve_iterative(int which, const VecC& rhs) const {
  const int n = op_->grid().interior();
  const Cplx c = (which == 1) ? c1_ : c2_;
  const double g = (which == 1) ? g1_ : g2_;
  const auto& prec = (which == 1) ? prec1_ : prec2_;
  const double s = 1.0 - 0.5 * tau_ * g;
  const Cplx f = -0.5 * tau_ * c;

  auto matvec = [&](const VecC& x) { return VecC(s * op_->apply_A(x) + f * op_->apply_B(x)); };
  auto precond = [&](const VecC& r) {
    std::vector<Cplx> buf(r.data(), r.data() + n);
    fft_fwd_->execute(buf.data());
    for (int k = 0; k < n; ++k) buf[k] /= prec[static_cast<size_t>(k)];
    fft_bwd_->execute(buf.data());
    VecC z(n);
    const double inv = 1.0 / n;
    for (int k = 0; k < n; ++k) z[k] = buf[static_cast<size_t>(k)] * inv;
    return z;
  };

  const double bnorm = rhs.norm();
  if (bnorm == 0.0) return VecC::Zero(n);
  const double tol = 1e-13;

  // Preconditioned BiCGSTAB seeded with the circulant solve.
  VecC x = precond(rhs);
  VecC r = rhs - matvec(x);
  if (r.norm() <= tol * bnorm) return x;
  const VecC rhat = r;
  Cplx rho(1.0, 0.0), alpha(1.0, 0.0), omega(1.0, 0.0);
  VecC v = VecC::Zero(n), pvec = VecC::Zero(n);
  const int max_it = 2000;
  for (int it = 1; it <= max_it; ++it) {
    const Cplx rho1 = rhat.dot(r);
    if (rho1 == Cplx(0.0, 0.0))
      throw std::runtime_error("linear half-step solve broke down (orthogonal residual)");
    if (it == 1) {
      pvec = r;
    } else {
      const Cplx beta = (rho1 / rho) * (alpha / omega);
      pvec = r + beta * (pvec - omega * v);
    }
    const VecC y = precond(pvec);
    v = matvec(y);
    const Cplx denom = rhat.dot(v);
    if (denom == Cplx(0.0, 0.0))
      throw std::runtime_error("linear half-step solve broke down (zero search direction)");
    alpha = rho1 / denom;
    const VecC svec = r - alpha * v;
    if (svec.norm() <= tol * bnorm) {
      x += alpha * y;
      return x;
    }
    const VecC z = precond(svec);
    const VecC t = matvec(z);
    const Cplx tt = t.dot(t);
    if (tt == Cplx(0.0, 0.0))
      throw std::runtime_error("linear half-step solve broke down (stagnation)");
    omega = t.dot(svec) / tt;
    x += alpha * y + omega * z;
    r = svec - omega * t;
    if (r.norm() <= tol * bnorm) return x;
    rho = rho1;
  }
  throw std::runtime_error("linear half-step solve failed to reach tolerance 1e-13");
}

FieldPair init_fields(const Grid1D& grid,
                      const std::function<std::complex<double>(double)>& u0,
                      const std::function<std::complex<double>(double)>& v0) {
  const int n = grid.interior();
  FieldPair f;
  f.U.resize(n);
  f.V.resize(n);
  f.t = 0.0;
  for (int j = 1; j <= n; ++j) {
    const double x = grid.a + j * grid.h;
    f.U[j - 1] = u0(x);
    f.V[j - 1] = v0(x);
  }
  return f;
}

FieldPair predictor(const FieldPair& current, const FieldPair* previous,
                    const ModelParams& p, const DiscreteOperator& op, double tau) {
  FieldPair g;
  g.t = current.t + 0.5 * tau;
  if (previous == nullptr) {
    // Explicit half-step from the semi-discrete system
    //   dU/dt = -(beta1 + i eta1) L^{alpha/2} U + gamma1 U + n1(U, V).
    const Cplx c1(p.beta1, p.eta1), c2(p.beta2, p.eta2);
    const VecC lapU = op.frac_laplacian(current.U);
    const VecC lapV = op.frac_laplacian(current.V);
    auto [n1, n2] = nonlinear(p, current.U, current.V);
    g.U = current.U + 0.5 * tau * (-c1 * lapU + p.gamma1 * current.U + n1);
    g.V = current.V + 0.5 * tau * (-c2 * lapV + p.gamma2 * current.V + n2);
  } else {
    g.U = 1.5 * current.U - 0.5 * previous->U;
    g.V = 1.5 * current.V - 0.5 * previous->V;
  }
  return g;
}

std::pair<FieldPair, IterationReport> fixed_point_halfstep(
    const FieldPair& state, const FieldPair& pred, const StepMatrices& mats,
    const ModelParams& p, double tol, int max_iter) {
  const DiscreteOperator& op = mats.op();
  const double tau = mats.tau();
  FieldPair g = pred;
  g.t = state.t + 0.5 * tau;
  IterationReport rep;
  for (int it = 1; it <= max_iter; ++it) {
    auto [n1, n2] = nonlinear(p, g.U, g.V);
    const VecC rhs1 = op.apply_A(VecC(state.U + 0.5 * tau * n1));
    const VecC rhs2 = op.apply_A(VecC(state.V + 0.5 * tau * n2));
    VecC Un = mats.solve_M1(rhs1);
    VecC Vn = mats.solve_M2(rhs2);
    const double du = (Un - g.U).lpNorm<Eigen::Infinity>();
    const double dv = (Vn - g.V).lpNorm<Eigen::Infinity>();
    g.U = std::move(Un);
    g.V = std::move(Vn);
    rep.iterations = it;
    rep.final_update = std::max(du, dv);
    if (!std::isfinite(rep.final_update))
      throw NonConvergenceError("fixed-point iterate became non-finite", rep);
    if (rep.final_update <= tol) {
      rep.converged = true;
      break;
    }
  }
  if (!rep.converged) {
    std::ostringstream msg;
    msg << "fixed-point half-step did not reach tolerance " << tol << " in "
        << max_iter << " iterations (last update " << rep.final_update << ")";
    throw NonConvergenceError(msg.str(), rep);
  }
  return {std::move(g), rep};
}

std::pair<FieldPair, IterationReport> step(const FieldPair& state,
                                           const FieldPair* previous,
                                           const StepMatrices& mats,
                                           const ModelParams& p, double tol,
                                           int max_iter) {
  const FieldPair pred = predictor(state, previous, p, mats.op(), mats.tau());
  auto [half, rep] = fixed_point_halfstep(state, pred, mats, p, tol, max_iter);
  FieldPair next;
  next.U = 2.0 * half.U - state.U;
  next.V = 2.0 * half.V - state.V;
  next.t = state.t + mats.tau();
  return {std::move(next), rep};
}

double energy(const FieldPair& f, double h) {
  return h * (f.U.squaredNorm() + f.V.squaredNorm());
}

RunResult run(const ModelParams& p, const Grid1D& grid,
              const std::function<std::complex<double>(double)>& u0,
              const std::function<std::complex<double>(double)>& v0, int nt,
              const StepCallback& cb, double tol, int max_iter, int dense_limit) {
  p.validate();
  if (nt < 1) throw std::invalid_argument("number of time steps must be >= 1");
  const double scale = std::max({1.0, std::abs(p.a), std::abs(p.b)});
  if (std::abs(grid.a - p.a) > 1e-12 * scale || std::abs(grid.b - p.b) > 1e-12 * scale)
    throw std::invalid_argument("grid endpoints disagree with the model domain");
  const double tau = p.T / nt;
  const double gmax = std::max(std::abs(p.gamma1), std::abs(p.gamma2));
  if (tau * gmax > 0.5) {
    std::fprintf(stderr,
                 "warning: tau * max|gamma| = %.6g exceeds 1/2; the discrete "
                 "energy growth bound is not guaranteed at this step size\n",
                 tau * gmax);
  }
  const DiscreteOperator op = DiscreteOperator::assemble(p.alpha, grid);
  const StepMatrices mats(op, p, tau, dense_limit);

  FieldPair state = init_fields(grid, u0, v0);
  RunResult res;
  res.energy.push_back({0.0, energy(state, grid.h)});
  if (cb) cb(0, state);

  FieldPair prev;
  bool have_prev = false;
  for (int k = 0; k < nt; ++k) {
    auto [next, rep] = step(state, have_prev ? &prev : nullptr, mats, p, tol, max_iter);
    prev = std::move(state);
    have_prev = true;
    state = std::move(next);
    state.t = (k + 1) * tau;
    res.reports.push_back(rep);
    res.energy.push_back({state.t, energy(state, grid.h)});
    if (cb) cb(k + 1, state);
  }
  res.final = std::move(state);
  return res;
}

}  // namespace fgl
