#include "fgl/harness.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fgl/coeffs.hpp"
#include "fgl/norms.hpp"

namespace fgl {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return std::string(buf);
}

double median_of(std::vector<int> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return (n % 2) ? static_cast<double>(v[n / 2])
                 : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct RunStats {
  int max_it = 0;
  double median_it = 0.0;
  double energy_max_ratio = 0.0;
};

RunStats run_stats(const RunResult& r) {
  RunStats s;
  std::vector<int> its;
  its.reserve(r.reports.size());
  for (const auto& rep : r.reports) {
    s.max_it = std::max(s.max_it, rep.iterations);
    its.push_back(rep.iterations);
  }
  s.median_it = median_of(std::move(its));
  const double w0 = r.energy.empty() ? 0.0 : r.energy.front().W;
  double wmax = 0.0;
  for (const auto& e : r.energy) wmax = std::max(wmax, e.W);
  s.energy_max_ratio = (w0 > 0.0) ? wmax / w0 : 0.0;
  return s;
}

// Least-squares slope of ln(y) against ln(x).
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const int n = static_cast<int>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  const int workers = std::min(thread_budget(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr err;
  auto body = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

int round_count(double total, double step, const char* what) {
  const long k = std::lround(total / step);
  if (k < 1 || std::abs(k * step - total) > 1e-9 * std::max(1.0, std::abs(total)))
    throw std::invalid_argument(std::string(what) +
                                " does not evenly divide the target interval");
  return static_cast<int>(k);
}

Eigen::MatrixXd dense_A(const DiscreteOperator& op) {
  const int n = op.grid().interior();
  const double w = op.varrho2();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    M(i, i) = 1.0 - 2.0 * w;
    if (i > 0) M(i, i - 1) = w;
    if (i + 1 < n) M(i, i + 1) = w;
  }
  return M;
}

Eigen::MatrixXd dense_B(const DiscreteOperator& op) {
  const int n = op.grid().interior();
  const VecR& c = op.b_first_column();
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = c[std::abs(i - j)];
  return M;
}

std::vector<double> closed_form_A_eigs(const DiscreteOperator& op) {
  const int nx = op.grid().nx;
  const double w = op.varrho2();
  std::vector<double> eig(static_cast<std::size_t>(nx - 1));
  for (int j = 1; j < nx; ++j) {
    const double s = std::sin(j * kPi / (2.0 * nx));
    eig[static_cast<std::size_t>(j - 1)] = 1.0 - 4.0 * w * s * s;
  }
  std::sort(eig.begin(), eig.end());
  return eig;
}

}  // namespace

// ---------------------------------------------------------------------------
// Rng
// ---------------------------------------------------------------------------

double Rng::uniform() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 2.0 * kPi * u2;
  spare_ = r * std::sin(th);
  have_spare_ = true;
  return r * std::cos(th);
}

std::complex<double> Rng::cnormal() {
  const double re = normal();
  const double im = normal();
  return {re, im};
}

std::uint64_t Rng::integer(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("integer: bound must be >= 1");
  return gen_() % bound;
}

int thread_budget() {
  if (const char* s = std::getenv("FGL_THREADS")) {
    const int v = std::atoi(s);
    if (v >= 1) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

// ---------------------------------------------------------------------------
// Pointwise accuracy experiment
// ---------------------------------------------------------------------------

std::vector<Table1Row> table1_experiment(const std::vector<double>& alphas,
                                         const std::vector<double>& hs,
                                         double x_eval) {
  if (alphas.empty() || hs.empty())
    throw std::invalid_argument("table1_experiment: empty alpha or h list");
  std::vector<std::vector<Table1Row>> blocks(alphas.size());
  parallel_for(static_cast<int>(alphas.size()), [&](int ai) {
    const double alpha = alphas[static_cast<std::size_t>(ai)];
    const PolyOracle oracle = example1_poly(alpha);
    const double exact = poly_exact_frac_laplacian(oracle, x_eval);
    std::vector<Table1Row>& rows = blocks[static_cast<std::size_t>(ai)];
    for (const double h : hs) {
      const int nx = round_count(oracle.b - oracle.a, h, "spacing h");
      const Grid1D grid = Grid1D::make(oracle.a, oracle.b, nx);
      const long j = std::lround((x_eval - grid.a) / grid.h);
      if (j < 1 || j > nx - 1 ||
          std::abs(grid.a + j * grid.h - x_eval) > 1e-12)
        throw std::invalid_argument("x_eval is not an interior grid node");
      const DiscreteOperator op = DiscreteOperator::assemble(alpha, grid);
      VecC u(grid.interior());
      for (int k = 1; k < nx; ++k)
        u[k - 1] = poly_value(oracle, grid.a + k * grid.h);
      const VecC y = op.frac_laplacian(u);
      Table1Row row;
      row.alpha = alpha;
      row.h = h;
      row.abs_error = std::abs(y[j - 1] - exact);
      rows.push_back(row);
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
      rows[i].order = std::log(rows[i - 1].abs_error / rows[i].abs_error) /
                      std::log(rows[i - 1].h / rows[i].h);
    }
  });
  std::vector<Table1Row> out;
  for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
  return out;
}

// ---------------------------------------------------------------------------
// Convergence experiment
// ---------------------------------------------------------------------------

ConvergenceResult convergence_experiment(
    const ModelParams& params, const Initial& u0, const Initial& v0,
    const std::vector<std::pair<double, double>>& pairs,
    std::pair<double, double> reference) {
  params.validate();
  if (pairs.empty())
    throw std::invalid_argument("convergence_experiment: no (tau, h) pairs");
  const auto [tau_ref, h_ref] = reference;
  const double len = params.b - params.a;
  const int nx_ref = round_count(len, h_ref, "reference spacing");
  const int nt_ref = round_count(params.T, tau_ref, "reference step size");

  struct PairPlan {
    double tau, h;
    int nx, nt, stride;
    bool self;
  };
  std::vector<PairPlan> plans;
  double min_tau = std::numeric_limits<double>::infinity();
  bool any_non_self = false;
  for (const auto& [tau, h] : pairs) {
    PairPlan p;
    p.tau = tau;
    p.h = h;
    p.self = (tau == tau_ref && h == h_ref);
    p.nx = round_count(len, h, "spacing h");
    p.nt = round_count(params.T, tau, "step size tau");
    p.stride = static_cast<int>(std::lround(h / h_ref));
    if (p.stride < 1 || std::abs(p.stride * h_ref - h) > 1e-9)
      throw std::invalid_argument(
          "incommensurate grids: h is not an integer multiple of the "
          "reference spacing");
    if (!p.self) {
      any_non_self = true;
      min_tau = std::min(min_tau, tau);
    }
    plans.push_back(p);
  }
  if (any_non_self && tau_ref > min_tau / 8.0 + 1e-15)
    throw std::invalid_argument(
        "reference step size must be at most one eighth of the smallest "
        "requested tau");

  const Grid1D grid_ref = Grid1D::make(params.a, params.b, nx_ref);
  const RunResult ref = run(params, grid_ref, u0, v0, nt_ref);
  const RunStats ref_stats = run_stats(ref);

  ConvergenceResult result;
  result.rows.resize(plans.size());
  result.reference_max_iterations = ref_stats.max_it;
  result.reference_median_iterations = ref_stats.median_it;
  result.reference_energy_max_ratio = ref_stats.energy_max_ratio;

  for (std::size_t i = 0; i < plans.size(); ++i) {
    const PairPlan& plan = plans[i];
    const Grid1D grid = Grid1D::make(params.a, params.b, plan.nx);
    const RunResult coarse = run(params, grid, u0, v0, plan.nt);
    const int nc = grid.interior();
    VecC du(nc), dv(nc);
    for (int j = 1; j <= nc; ++j) {
      const int rj = j * plan.stride - 1;
      du[j - 1] = coarse.final.U[j - 1] - ref.final.U[rj];
      dv[j - 1] = coarse.final.V[j - 1] - ref.final.V[rj];
    }
    ConvergenceRow& row = result.rows[i];
    row.alpha = params.alpha;
    row.tau = plan.tau;
    row.h = plan.h;
    const double eu = du.norm(), ev = dv.norm();
    row.error_u_l2 = eu;
    row.error_v_l2 = ev;
    row.error_l2 = std::max(eu, ev);
    row.error_u_l2h = std::sqrt(grid.h) * eu;
    row.error_v_l2h = std::sqrt(grid.h) * ev;
    row.error_l2h = std::max(row.error_u_l2h, row.error_v_l2h);
    const RunStats st = run_stats(coarse);
    row.max_iterations = st.max_it;
    row.median_iterations = st.median_it;
    row.energy_max_ratio = st.energy_max_ratio;
  }
  for (std::size_t i = 1; i < result.rows.size(); ++i) {
    ConvergenceRow& cur = result.rows[i];
    const ConvergenceRow& prev = result.rows[i - 1];
    const double lt = std::log(prev.tau / cur.tau);
    const double lh = std::log(prev.h / cur.h);
    if (prev.error_l2h > 0.0 && cur.error_l2h > 0.0) {
      const double le = std::log(prev.error_l2h / cur.error_l2h);
      if (lt != 0.0) cur.temporal_order = le / lt;
      if (lh != 0.0) cur.spatial_order = le / lh;
    }
    if (prev.error_l2 > 0.0 && cur.error_l2 > 0.0) {
      const double le = std::log(prev.error_l2 / cur.error_l2);
      if (lt != 0.0) cur.temporal_order_l2 = le / lt;
      if (lh != 0.0) cur.spatial_order_l2 = le / lh;
    }
  }
  return result;
}

ModelParams table2_params(double alpha) {
  ModelParams p;
  p.alpha = alpha;
  p.beta1 = p.beta2 = 1e-2;
  p.eta1 = p.eta2 = 1e-2;
  p.mu1 = p.mu2 = 1.0;
  p.zeta1 = p.zeta2 = 1e-2;
  p.gamma1 = p.gamma2 = 2.0 / 23.0;
  p.a = -1.0;
  p.b = 1.0;
  p.T = 1.0;
  return p;
}

ModelParams table3_params(double alpha) {
  ModelParams p;
  p.alpha = alpha;
  p.beta1 = p.beta2 = 1e-3;
  p.eta1 = p.eta2 = 1e-3;
  p.mu1 = p.mu2 = 1e-1;
  p.zeta1 = p.zeta2 = 1e-1;
  p.gamma1 = -480.0;
  p.gamma2 = -20.0;
  p.a = -1.0;
  p.b = 1.0;
  p.T = 1.0;
  return p;
}

std::complex<double> example2_initial(double x) {
  const double w = 1.0 - x * x;
  return {std::exp(-8.0) * w * w, 0.0};
}

std::vector<double> default_alphas() {
  return {1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9, 2.0};
}

std::vector<std::pair<double, double>> default_pairs() {
  return {{1.0 / 5.0, 1.0 / 5.0}, {1.0 / 20.0, 1.0 / 10.0}};
}

TableRun table_experiment(int table, const std::vector<double>& alphas,
                          const std::vector<std::pair<double, double>>& pairs,
                          std::pair<double, double> reference,
                          const OrderWindows& windows) {
  if (table != 2 && table != 3)
    throw std::invalid_argument("table_experiment: table must be 2 or 3");
  TableRun out;
  out.table = table;
  out.alphas = alphas;
  out.results.resize(alphas.size());
  parallel_for(static_cast<int>(alphas.size()), [&](int i) {
    const double alpha = alphas[static_cast<std::size_t>(i)];
    const ModelParams p = (table == 2) ? table2_params(alpha) : table3_params(alpha);
    out.results[static_cast<std::size_t>(i)] = convergence_experiment(
        p, example2_initial, example2_initial, pairs, reference);
  });
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    const auto& rows = out.results[a].rows;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const ConvergenceRow& prev = rows[i - 1];
      const ConvergenceRow& cur = rows[i];
      auto violation = [&](const std::string& what) {
        out.window_violations.push_back(
            fmt("table %d alpha=%.2f rows %zu->%zu: %s", table, alphas[a],
                i - 1, i, what.c_str()));
      };
      if (cur.temporal_order_l2) {
        const double v = *cur.temporal_order_l2;
        if (v < windows.temporal_lo || v > windows.temporal_hi)
          violation(fmt("temporal order %.4f outside [%.2f, %.2f]", v,
                        windows.temporal_lo, windows.temporal_hi));
      } else {
        violation("temporal order unavailable (zero error)");
      }
      if (cur.spatial_order_l2) {
        const double v = *cur.spatial_order_l2;
        if (v < windows.spatial_lo || v > windows.spatial_hi)
          violation(fmt("spatial order %.4f outside [%.2f, %.2f]", v,
                        windows.spatial_lo, windows.spatial_hi));
      } else {
        violation("spatial order unavailable (zero error)");
      }
      // The error-ratio window applies to the canonical refinement only
      // (tau shrunk 4x while h shrinks 2x).
      const bool canonical = std::abs(prev.tau / cur.tau - 4.0) < 1e-9 &&
                             std::abs(prev.h / cur.h - 2.0) < 1e-9;
      if (canonical) {
        if (cur.error_l2 > 0.0) {
          const double ratio = prev.error_l2 / cur.error_l2;
          if (ratio < windows.ratio_lo || ratio > windows.ratio_hi)
            violation(fmt("error ratio %.3f outside [%.1f, %.1f]", ratio,
                          windows.ratio_lo, windows.ratio_hi));
        } else {
          violation("error ratio unavailable (zero error)");
        }
      }
    }
  }
  out.windows_pass = out.window_violations.empty();
  return out;
}

std::vector<double> iteration_median_sweep(int table, double alpha, double h,
                                           const std::vector<double>& taus) {
  const ModelParams p = (table == 2) ? table2_params(alpha) : table3_params(alpha);
  const int nx = round_count(p.b - p.a, h, "spacing h");
  const Grid1D grid = Grid1D::make(p.a, p.b, nx);
  std::vector<double> medians;
  for (const double tau : taus) {
    const int nt = round_count(p.T, tau, "step size tau");
    const RunResult r = run(p, grid, example2_initial, example2_initial, nt);
    medians.push_back(run_stats(r).median_it);
  }
  return medians;
}

// ---------------------------------------------------------------------------
// Soliton-evolution experiment
// ---------------------------------------------------------------------------

namespace {

std::complex<double> soliton_u0(double x) {
  return std::polar(1.0 / std::cosh(x + 5.0), 8.0 * x);
}

std::complex<double> soliton_v0(double x) {
  return std::polar(1.0 / std::cosh(x - 5.0), -8.0 * x);
}

struct VariantSpec {
  ModelParams base;                                   // gamma/alpha filled per run
  std::vector<double> alphas;                         // alpha sweep (gamma fixed)
  std::vector<std::pair<double, double>> gammas;      // gamma sweep (alpha fixed)
  std::vector<double> default_snapshots;
};

VariantSpec variant_spec(const std::string& name) {
  VariantSpec v;
  ModelParams& p = v.base;
  p.a = -10.0;
  p.b = 10.0;
  p.T = 10.0;
  if (name == "fig7.1") {
    p.beta1 = p.beta2 = 1e-1;
    p.eta1 = p.eta2 = 1e-2;
    p.mu1 = p.mu2 = 1.0;
    p.zeta1 = p.zeta2 = 1e-1;
    p.gamma1 = 0.25;
    p.gamma2 = -2.0;
    v.alphas = {1.2, 1.5, 1.8, 2.0};
  } else if (name == "fig7.2") {
    p.beta1 = p.beta2 = 1e-3;
    p.eta1 = p.eta2 = 1.0;
    p.mu1 = p.mu2 = 1e-4;
    p.zeta1 = p.zeta2 = 1e-1;
    p.gamma1 = p.gamma2 = 1e-2;
    v.alphas = {1.2, 1.5, 1.8, 2.0};
    v.default_snapshots = {0.1, 1.0, 5.0, 10.0};
  } else if (name == "fig7.3") {
    p.beta1 = p.beta2 = 1e-1;
    p.eta1 = p.eta2 = 1e-2;
    p.mu1 = p.mu2 = 1.0;
    p.zeta1 = p.zeta2 = 1e-1;
    v.alphas = {1.5};
    v.gammas = {{0.5, 0.5}, {0.0, 0.0}, {-1.0, -1.0}, {-2.0, -2.0}};
  } else if (name == "fig7.4") {
    p.beta1 = p.beta2 = 1e-1;
    p.eta1 = p.eta2 = 1e-4;
    p.mu1 = p.mu2 = 1e-3;
    p.zeta1 = p.zeta2 = 1e-2;
    v.alphas = {1.5};
    v.gammas = {{0.0, 0.0}, {-0.5, -0.5}, {-1.0, -1.0}, {-2.0, -2.0}};
  } else {
    throw std::invalid_argument(
        "unknown variant '" + name +
        "' (expected fig7.1, fig7.2, fig7.3, or fig7.4)");
  }
  return v;
}

}  // namespace

std::vector<EvolutionData> example3_run(const std::string& variant, int nx,
                                        int steps_per_unit,
                                        std::vector<double> snapshot_times,
                                        double T_override,
                                        const std::vector<double>& alphas_override) {
  VariantSpec spec = variant_spec(variant);
  if (T_override > 0.0) spec.base.T = T_override;
  if (snapshot_times.empty()) snapshot_times = spec.default_snapshots;
  std::vector<double> snaps;
  for (const double t : snapshot_times)
    if (t <= spec.base.T + 1e-9) snaps.push_back(t);

  struct Job {
    double alpha, g1, g2;
  };
  std::vector<Job> jobs;
  if (!spec.gammas.empty()) {
    for (const auto& [g1, g2] : spec.gammas)
      jobs.push_back({spec.alphas.front(), g1, g2});
  } else {
    const std::vector<double>& as =
        alphas_override.empty() ? spec.alphas : alphas_override;
    for (const double a : as) jobs.push_back({a, spec.base.gamma1, spec.base.gamma2});
  }

  const int nt = static_cast<int>(std::lround(steps_per_unit * spec.base.T));
  if (nt < 1) throw std::invalid_argument("time horizon too short for step count");
  const double tau = spec.base.T / nt;
  std::vector<int> snap_steps;
  for (const double t : snaps) {
    const long k = std::lround(t / tau);
    if (k < 0 || k > nt || std::abs(k * tau - t) > 1e-9 * std::max(1.0, t))
      throw std::invalid_argument(
          "snapshot time does not land on a time-step boundary");
    snap_steps.push_back(static_cast<int>(k));
  }

  const Grid1D grid = Grid1D::make(spec.base.a, spec.base.b, nx);
  std::vector<EvolutionData> out(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), [&](int ji) {
    const Job& job = jobs[static_cast<std::size_t>(ji)];
    ModelParams p = spec.base;
    p.alpha = job.alpha;
    p.gamma1 = job.g1;
    p.gamma2 = job.g2;
    EvolutionData& data = out[static_cast<std::size_t>(ji)];
    data.variant = variant;
    data.alpha = p.alpha;
    data.gamma1 = p.gamma1;
    data.gamma2 = p.gamma2;
    data.x.resize(static_cast<std::size_t>(grid.interior()));
    for (int j = 1; j < nx; ++j)
      data.x[static_cast<std::size_t>(j - 1)] = grid.a + j * grid.h;
    const int record_every = std::max(1, nt / 100);
    auto cb = [&](int k, const FieldPair& f) {
      if (k % record_every == 0 || k == nt) {
        data.times.push_back(k * tau);
        data.abs_u.push_back(f.U.cwiseAbs());
        data.abs_v.push_back(f.V.cwiseAbs());
      }
      if (std::find(snap_steps.begin(), snap_steps.end(), k) != snap_steps.end())
        data.snapshots.push_back(f);
    };
    const RunResult r = run(p, grid, soliton_u0, soliton_v0, nt, cb);
    data.energy = r.energy;
    for (const auto& rep : r.reports)
      data.max_iterations = std::max(data.max_iterations, rep.iterations);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Invariant suite
// ---------------------------------------------------------------------------

namespace {

// Real test vectors drawn from four shapes: dense normal noise, a smooth
// low-frequency superposition, a single spike, and the alternating mode.
VecR ensemble_vector(Rng& rng, int n, int kind) {
  VecR u = VecR::Zero(n);
  switch (kind % 4) {
    case 0:
      for (int j = 0; j < n; ++j) u[j] = rng.normal();
      break;
    case 1: {
      double g[4];
      for (double& c : g) c = rng.normal();
      for (int j = 0; j < n; ++j) {
        const double xj = static_cast<double>(j + 1) / (n + 1);
        double s = 0.0;
        for (int q = 0; q < 4; ++q) s += g[q] * std::sin((q + 1) * kPi * xj);
        u[j] = s;
      }
      break;
    }
    case 2:
      u[static_cast<Eigen::Index>(rng.integer(static_cast<std::uint64_t>(n)))] = 1.0;
      break;
    default:
      for (int j = 0; j < n; ++j) u[j] = (j % 2 == 0) ? 1.0 : -1.0;
      break;
  }
  return u;
}

VecC random_complex(Rng& rng, int n) {
  VecC u(n);
  for (int j = 0; j < n; ++j) u[j] = rng.cnormal();
  return u;
}

}  // namespace

std::string SuiteReport::to_string() const {
  std::ostringstream os;
  os << "invariant suite seed=" << seed << "\n";
  int failed = 0;
  for (const auto& c : checks) {
    os << (c.pass ? "PASS" : "FAIL") << " " << c.name << ": " << c.measured
       << "\n";
    if (!c.pass) ++failed;
  }
  if (failed == 0)
    os << "result: ALL PASS (" << checks.size() << " checks)\n";
  else
    os << "result: " << failed << " FAILED of " << checks.size() << "\n";
  return os.str();
}

SuiteReport invariant_suite(std::uint64_t seed) {
  SuiteReport report;
  report.seed = seed;
  Rng rng(seed);
  auto add = [&](const std::string& name, bool pass, std::string measured) {
    report.checks.push_back({name, pass, std::move(measured)});
  };

  // --- coefficient family -------------------------------------------------
  {
    double worst = 0.0;
    const std::size_t ns[] = {1, 2, 5, 10, 50, 100, 200, 400};
    for (int t = 0; t < 10; ++t) {
      const double alpha = 1.001 + 0.999 * rng.uniform();
      const CoeffTable rec = g2_coeffs(alpha, 400);
      for (const std::size_t n : ns) {
        const double d = g2_coeff_direct(alpha, n);
        // Deviation measured against max(1, |kappa|): the coefficients
        // collapse toward zero as alpha -> 1 while the direct sum keeps O(1)
        // cancellation noise, so a pure relative gate is not meaningful there.
        const double dev =
            std::abs(rec.values[n] - d) / std::max(1.0, std::abs(d));
        worst = std::max(worst, dev);
      }
    }
    add("coeffs-recursion-vs-direct", worst <= 1e-12,
        fmt("max deviation %.3e relative to max(1, |kappa|) (tolerance 1e-12)",
            worst));
  }
  {
    double canc = 0.0;
    const double v = g2_coeff_direct(1.5, 2000, &canc);
    add("coeffs-direct-cancellation-report",
        std::isfinite(canc) && canc >= 1.0,
        fmt("kappa(n=2000)=%.6e with cancellation metric %.3e", v, canc));
  }
  {
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
      const double alpha = 1.001 + 0.999 * rng.uniform();
      const CoeffTable a = g4_coeffs(alpha, 400);
      const CoeffTable b = g4_coeffs_recursion(alpha, 400);
      for (std::size_t m = 0; m < a.values.size(); ++m) {
        const double dev = std::abs(a.values[m] - b.values[m]) /
                           std::max(1.0, std::abs(b.values[m]));
        worst = std::max(worst, dev);
      }
    }
    add("coeffs-g4-identity-vs-recursion", worst <= 1e-12,
        fmt("max deviation %.3e relative to max(1, |kappa|) (tolerance 1e-12)",
            worst));
  }
  {
    bool pass = true;
    std::string meas;
    for (const double alpha : {1.3, 1.7}) {
      const CoeffTable t = g2_coeffs(alpha, 10000);
      std::vector<double> Ls = {100.0, 1000.0, 10000.0}, Ss;
      for (const double L : Ls) {
        double s = 0.0;
        for (std::size_t n = 0; n <= static_cast<std::size_t>(L); ++n)
          s += t.values[n];
        Ss.push_back(std::abs(s));
      }
      const double slope = loglog_slope(Ls, Ss);
      if (std::abs(slope + alpha) > 0.15) pass = false;
      meas += fmt("alpha=%.1f slope=%.3f (expect %.1f +- 0.15) ", alpha, slope, -alpha);
    }
    add("coeffs-partial-sum-decay", pass, meas);
  }
  {
    bool pass = true;
    std::string meas;
    for (const double alpha : {1.25, 1.5, 1.75}) {
      const std::size_t n = 100000;
      const CoeffTable t = g2_coeffs(alpha, n);
      const double ratio = t.values[n] * std::pow(static_cast<double>(n), alpha + 1.0) *
                           kPi / (std::sin(kPi * alpha) * std::tgamma(alpha + 1.0));
      if (std::abs(ratio) < 0.95 || std::abs(ratio) > 1.05) pass = false;
      meas += fmt("alpha=%.2f ratio=%.6f ", alpha, ratio);
    }
    add("coeffs-asymptotic-decay-constant", pass,
        meas + "(|ratio| must lie in [0.95, 1.05])");
  }
  {
    bool pass = true;
    std::string meas;
    const std::size_t L = 60000;
    for (const double alpha : {1.2, 1.5, 1.8, 2.0}) {
      const CoeffTable t = g4_coeffs(alpha, L);
      const ExpansionCoeffs ec = expansion_coeffs(alpha);
      auto remainders = [&](double z0, std::vector<double>& zs,
                            std::vector<double>& rem2, std::vector<double>& rem4) {
        for (int i = 0; i < 4; ++i) {
          const double z = std::pow(10.0, z0 - 0.2 * i);
          double s = 0.0;
          for (std::size_t m = 0; m <= L; ++m)
            s += t.values[m] * std::exp(-static_cast<double>(m) * z);
          const double F = std::exp(z) * std::pow(z, -alpha) * s;
          zs.push_back(z);
          rem2.push_back(std::abs(F - 1.0 - ec.varrho2 * z * z));
          rem4.push_back(
              std::abs(F - 1.0 - ec.varrho2 * z * z - ec.varrho4 * z * z * z * z));
        }
      };
      std::vector<double> zs, rem2, rem4;
      remainders(-1.0, zs, rem2, rem4);
      const double s2 = loglog_slope(zs, rem2);
      double s4 = loglog_slope(zs, rem4);
      double need4 = 4.7;
      if (alpha == 2.0) {
        // The sixth-order remainder sits below the rounding floor of the
        // 60000-term sum on the small-z grid, so fit it on larger z where it
        // is still orders of magnitude above that floor.
        std::vector<double> zb, r2b, r4b;
        remainders(-0.5, zb, r2b, r4b);
        s4 = loglog_slope(zb, r4b);
        need4 = 5.7;
      }
      if (s2 < 3.7 || s4 < need4) pass = false;
      meas += fmt("alpha=%.1f slopes %.2f/%.2f (need >=3.7/>=%.1f) ", alpha, s2, s4, need4);
    }
    add("coeffs-expansion-remainder-slopes", pass, meas);
  }
  {
    double zmax = -std::numeric_limits<double>::infinity();
    double z1lo = std::numeric_limits<double>::infinity();
    double z1excess = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 200; ++i) {
      const double alpha = 1.0 + (i + 1) * (1.0 / 200.0);
      const double cap = std::cos(kPi * alpha / 2.0);
      for (int j = 0; j < 200; ++j) {
        const double s = j * kPi / 199.0;
        const SymbolValues v = symbol_functions(alpha, s);
        zmax = std::max(zmax, v.Z);
        z1lo = std::min(z1lo, v.Z1);
        z1excess = std::max(z1excess, v.Z1 - cap);
      }
    }
    add("coeffs-symbol-nonpositive", zmax <= 1e-12,
        fmt("max Z over 200x200 grid = %.3e (tolerance 1e-12)", zmax));
    add("coeffs-symbol-bounds", z1lo >= -1.0 - 1e-12 && z1excess <= 1e-12,
        fmt("min Z1 = %.6f (>= -1), max Z1 - cos(pi alpha/2) = %.3e", z1lo, z1excess));
  }

  // --- discrete operators ---------------------------------------------------
  {
    double worst = 0.0;
    const Grid1D grid = Grid1D::make(0.0, 1.0, 512);
    for (const double alpha : {1.001 + 0.999 * rng.uniform(), 2.0}) {
      const DiscreteOperator op = DiscreteOperator::assemble(alpha, grid);
      const VecC u = random_complex(rng, grid.interior());
      const VecC fast = op.apply_B(u);
      const VecC direct = op.apply_B_direct(u);
      const double dev = (fast - direct).lpNorm<Eigen::Infinity>() /
                         direct.lpNorm<Eigen::Infinity>();
      worst = std::max(worst, dev);
    }
    add("operators-matvec-dual-route", worst <= 1e-12,
        fmt("max relative deviation %.3e at nx=512 (tolerance 1e-12)", worst));
  }
  {
    double worst = 0.0;
    for (const int nx : {16, 64, 256}) {
      const double alpha = 1.001 + 0.999 * rng.uniform();
      const Grid1D grid = Grid1D::make(0.0, 1.0, nx);
      const DiscreteOperator op = DiscreteOperator::assemble(alpha, grid);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_A(op),
                                                        Eigen::EigenvaluesOnly);
      const std::vector<double> closed = closed_form_A_eigs(op);
      for (int j = 0; j < grid.interior(); ++j)
        worst = std::max(worst,
                         std::abs(es.eigenvalues()[j] - closed[static_cast<std::size_t>(j)]));
    }
    add("operators-weight-eigenvalues", worst <= 1e-10,
        fmt("max deviation from closed form %.3e (tolerance 1e-10)", worst));
  }
  {
    double mx = -std::numeric_limits<double>::infinity();
    const Grid1D grid = Grid1D::make(-1.0, 1.0, 128);
    for (const double alpha : {1.2, 1.5, 1.8}) {
      const DiscreteOperator op = DiscreteOperator::assemble(alpha, grid);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_B(op),
                                                        Eigen::EigenvaluesOnly);
      mx = std::max(mx, es.eigenvalues().maxCoeff());
    }
    add("operators-b-spectrum-nonpositive", mx <= 1e-10,
        fmt("max eigenvalue %.3e at nx=128 (tolerance 1e-10)", mx));
  }
  {
    const Grid1D grid = Grid1D::make(0.0, 1.0, 64);
    const DiscreteOperator op = DiscreteOperator::assemble(2.0, grid);
    const double h2 = grid.h * grid.h;
    double dev = std::abs(op.b_first_column()[0] + 2.0 / h2);
    dev = std::max(dev, std::abs(op.b_first_column()[1] - 1.0 / h2));
    for (int d = 2; d < grid.interior(); ++d)
      dev = std::max(dev, std::abs(op.b_first_column()[d]));
    const double adev = std::abs(op.varrho2() - 1.0 / 12.0);
    add("operators-classical-limit", dev <= 1e-12 * (2.0 / h2) && adev <= 1e-15,
        fmt("second-difference deviation %.3e, averaging-weight deviation %.3e",
            dev, adev));
  }
  {
    const Grid1D grid = Grid1D::make(0.0, 1.0, 256);
    const DiscreteOperator op = DiscreteOperator::assemble(1.6, grid);
    const VecC u = random_complex(rng, grid.interior());
    const VecC y = op.frac_laplacian(u);
    const VecC resid = op.apply_A(y) + op.apply_B(u);
    const double rel = resid.lpNorm<Eigen::Infinity>() /
                       op.apply_B(u).lpNorm<Eigen::Infinity>();
    add("operators-laplacian-residual", rel <= 1e-12,
        fmt("relative residual %.3e (tolerance 1e-12)", rel));
  }
  {
    bool pass = true;
    std::string meas;
    const Grid1D grid = Grid1D::make(-1.0, 1.0, 128);
    for (const double alpha : {1.1, 1.3, 1.5, 1.7, 1.9, 2.0}) {
      const DiscreteOperator op = DiscreteOperator::assemble(alpha, grid);
      const GenFnParams g = gen_fn_params(alpha);
      const double c = std::cos(kPi * alpha / 2.0);
      const double r2 = op.varrho2();
      const double C1 = std::pow(g.b0 + g.b2, alpha) * (4.0 * g.eta - c) /
                        (2.0 * c) * std::pow(2.0 / kPi, alpha);
      const double C2 = std::pow(g.b0 - g.b2, alpha) *
                        (alpha * alpha - 16.0 * g.eta * (alpha - 1.0) * (alpha - 1.0)) /
                        (2.0 * alpha * alpha * c * (1.0 - 4.0 * r2));
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (int t = 0; t < 20; ++t) {
        const VecR u = ensemble_vector(rng, grid.interior(), t);
        const VecC uc = u.cast<std::complex<double>>();
        const VecC q = -op.frac_laplacian(uc);  // A^{-1} B u
        const double form = grid.h * u.dot(q.real());
        const double semi = frac_seminorm(uc, grid.h, alpha / 2.0);
        const double ratio = form / (semi * semi);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
      if (!(2.0 * C2 - 1e-12 <= lo && hi <= 2.0 * C1 + 1e-12)) pass = false;
      meas += fmt("alpha=%.1f ratios [%.3f, %.3f] in [%.3f, %.3f] ", alpha, lo,
                  hi, 2.0 * C2, 2.0 * C1);
    }
    add("operators-quadratic-form-bounds", pass, meas);
  }

  // --- norms ----------------------------------------------------------------
  {
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      const int n = 32 + static_cast<int>(rng.integer(225));
      const VecC u = random_complex(rng, n);
      worst = std::max(worst, parseval_residual(u, 1.0 / (n + 1)));
    }
    add("norms-parseval", worst <= 1e-12,
        fmt("max relative residual %.3e over 20 random vectors", worst));
  }
  {
    double worst = 0.0;
    const VecC u = random_complex(rng, 63);
    for (const double sigma : {0.3, 0.75, 1.0}) {
      const double a = frac_seminorm(u, 1.0 / 64.0, sigma);
      const double b = frac_seminorm_direct(u, 1.0 / 64.0, sigma);
      worst = std::max(worst, std::abs(a - b) / b);
    }
    add("norms-seminorm-dual-route", worst <= 1e-10,
        fmt("max relative deviation %.3e (tolerance 1e-10)", worst));
  }
  {
    double min_margin = std::numeric_limits<double>::infinity();
    for (int t = 0; t < 100; ++t) {
      const VecC u = random_complex(rng, 63);
      const auto [s0, s] = (t % 2 == 0) ? std::make_pair(0.3, 0.75)
                                        : std::make_pair(0.5, 1.0);
      const auto [lhs, rhs] = interpolation_probe(u, 1.0 / 64.0, s0, s);
      min_margin = std::min(min_margin, rhs / lhs);
    }
    add("norms-interpolation-inequality", min_margin >= 1.0 - 1e-12,
        fmt("min rhs/lhs margin %.6f over 100 random vectors", min_margin));
  }
  {
    double min_margin = std::numeric_limits<double>::infinity();
    for (int t = 0; t < 100; ++t) {
      const VecC u = random_complex(rng, 63);
      const bool first = (t % 2 == 0);
      const double p = first ? 4.0 : 6.0;
      const double s0 = first ? 0.3 : 0.4;
      const double s = first ? 0.75 : 0.9;
      const auto [lhs, rhs] = gn_probe(u, 1.0 / 64.0, s0, s, p);
      min_margin = std::min(min_margin, rhs / lhs);
    }
    add("norms-embedding-inequality", min_margin >= 1.0 - 1e-12,
        fmt("min rhs/lhs margin %.6f over 100 random vectors", min_margin));
  }

  // --- solver -----------------------------------------------------------------
  {
    ModelParams p;
    p.alpha = 1.5;
    p.test_mode = true;
    p.gamma1 = 2.0 / 23.0;
    p.gamma2 = -0.4;
    p.a = 0.0;
    p.b = 1.0;
    p.T = 1.0;
    const Grid1D grid = Grid1D::make(0.0, 1.0, 32);
    const double tau = p.T / 100;
    const double rho = (2.0 + tau * p.gamma1) / (2.0 - tau * p.gamma1);
    auto u0 = [](double x) {
      return std::complex<double>(std::sin(kPi * x), 0.5 * std::sin(2.0 * kPi * x));
    };
    auto zero = [](double) { return std::complex<double>(0.0, 0.0); };
    const FieldPair init = init_fields(grid, u0, zero);
    double worst = 0.0;
    auto cb = [&](int k, const FieldPair& f) {
      if (k == 0) return;
      const double factor = std::pow(rho, k);
      const double dev =
          (f.U - factor * init.U).lpNorm<Eigen::Infinity>() /
          (factor * init.U.lpNorm<Eigen::Infinity>());
      worst = std::max(worst, dev);
    };
    run(p, grid, u0, zero, 100, cb);
    add("solver-linear-exactness", worst <= 1e-12,
        fmt("max relative deviation %.3e over 100 steps (tolerance 1e-12)", worst));
  }
  {
    const ModelParams p = table2_params(1.5);
    const Grid1D grid = Grid1D::make(p.a, p.b, 64);
    const DiscreteOperator op = DiscreteOperator::assemble(p.alpha, grid);
    const double tau = 0.05;
    double worst = 0.0;
    for (const int dense_limit : {2048, 8}) {
      const StepMatrices mats(op, p, tau, dense_limit);
      const VecC rhs = random_complex(rng, grid.interior());
      const VecC x = mats.solve_M1(rhs);
      const std::complex<double> c1(p.beta1, p.eta1);
      const VecC back = (1.0 - 0.5 * tau * p.gamma1) * op.apply_A(x) -
                        (0.5 * tau) * c1 * op.apply_B(x);
      worst = std::max(worst, (back - rhs).lpNorm<Eigen::Infinity>() /
                                  rhs.lpNorm<Eigen::Infinity>());
    }
    add("solver-halfstep-residual", worst <= 1e-12,
        fmt("max relative residual %.3e over dense and iterative paths", worst));
  }
  {
    bool pass = true;
    std::string meas;
    for (const double alpha : {1.4, 1.9}) {
      const ModelParams p = table2_params(alpha);
      const Grid1D grid = Grid1D::make(p.a, p.b, 20);
      const std::vector<double> taus = {1.0 / 10, 1.0 / 20, 1.0 / 40, 1.0 / 80};
      std::vector<double> ds;
      for (const double tau : taus) {
        ModelParams p1 = p;
        p1.T = tau;
        const RunResult r1 = run(p1, grid, example2_initial, example2_initial, 1);
        const RunResult r2 = run(p1, grid, example2_initial, example2_initial, 2);
        const double d = std::sqrt(grid.h) *
                         std::max((r1.final.U - r2.final.U).norm(),
                                  (r1.final.V - r2.final.V).norm());
        ds.push_back(d);
      }
      const double slope = loglog_slope(taus, ds);
      if (slope < 2.7 || slope > 3.3) pass = false;
      meas += fmt("alpha=%.1f slope=%.3f ", alpha, slope);
    }
    add("solver-step-doubling-order", pass, meas + "(window [2.7, 3.3])");
  }
  {
    bool pass = true;
    std::string meas;
    for (const int table : {2, 3}) {
      for (const double alpha : {1.3, 1.8}) {
        const std::vector<double> meds = iteration_median_sweep(
            table, alpha, 1.0 / 5.0, {1.0 / 10, 1.0 / 20, 1.0 / 40});
        const bool noninc = meds[0] >= meds[1] && meds[1] >= meds[2];
        const bool small = meds[0] <= 50 && meds[1] <= 50 && meds[2] <= 50;
        if (!noninc || !small) pass = false;
        meas += fmt("T%d alpha=%.1f medians %.1f/%.1f/%.1f ", table, alpha,
                    meds[0], meds[1], meds[2]);
      }
    }
    add("solver-iteration-medians", pass, meas + "(non-increasing, <= 50)");
  }
  {
    bool pass = true;
    std::string meas;
    for (const double alpha : {1.2, 2.0}) {
      const ModelParams p = table2_params(alpha);
      const double bound = std::exp(4.0 * std::max(std::abs(p.gamma1), std::abs(p.gamma2)) * p.T);
      for (const auto& [tau, h] : default_pairs()) {
        const int nx = round_count(p.b - p.a, h, "spacing h");
        const int nt = round_count(p.T, tau, "step size tau");
        const Grid1D grid = Grid1D::make(p.a, p.b, nx);
        const RunResult r = run(p, grid, example2_initial, example2_initial, nt);
        const double ratio = run_stats(r).energy_max_ratio;
        if (ratio > bound * (1.0 + 1e-12)) pass = false;
        meas += fmt("alpha=%.1f tau=%.2f maxW/W0=%.4f ", alpha, tau, ratio);
      }
    }
    add("solver-energy-bound", pass,
        meas + fmt("(bound %.4f)", std::exp(4.0 * (2.0 / 23.0))));
  }
  {
    const ModelParams p = table2_params(1.7);
    const Grid1D grid = Grid1D::make(p.a, p.b, 16);
    const RunResult r1 = run(p, grid, example2_initial, example2_initial, 20);
    const RunResult r2 = run(p, grid, example2_initial, example2_initial, 20);
    const double d = std::max((r1.final.U - r2.final.U).lpNorm<Eigen::Infinity>(),
                              (r1.final.V - r2.final.V).lpNorm<Eigen::Infinity>());
    add("solver-run-determinism", d == 0.0,
        fmt("max difference between identical reruns %.1e (must be exactly 0)", d));
  }
  {
    const ModelParams p = table2_params(1.5);
    const ConvergenceResult r = convergence_experiment(
        p, example2_initial, example2_initial, {{1.0 / 40, 1.0 / 10}},
        {1.0 / 40, 1.0 / 10});
    add("harness-self-reference-zero", r.rows[0].error_l2 == 0.0,
        fmt("error against identical rerun %.1e (must be exactly 0)",
            r.rows[0].error_l2));
  }
  {
    const double alpha = 1.6;
    const CoeffTable t = g2_coeffs(alpha, 600);
    const double direct = g2_coeff_direct(alpha, 300);
    const double dev0 = std::abs(t.values[300] - direct) / std::abs(direct);
    const double perturbed = t.values[300] * (1.0 + 1e-6);
    const double dev1 = std::abs(perturbed - direct) / std::abs(direct);
    add("fault-injection-sensitivity", dev0 <= 1e-12 && dev1 > 1e-12,
        fmt("clean deviation %.3e, perturbed deviation %.3e "
            "(a 1e-6 fault must trip the 1e-12 gate)",
            dev0, dev1));
  }

  report.all_pass = true;
  for (const auto& c : report.checks)
    if (!c.pass) report.all_pass = false;
  return report;
}

}  // namespace fgl
