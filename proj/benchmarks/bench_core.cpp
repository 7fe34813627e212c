#include <benchmark/benchmark.h>

#include <complex>

#include "fgl/coeffs.hpp"
#include "fgl/harness.hpp"
#include "fgl/norms.hpp"
#include "fgl/operators.hpp"
#include "fgl/solver.hpp"

namespace {

void BM_CoeffRecursion(benchmark::State& state) {
  const auto L = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fgl::g4_coeffs(1.5, L));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CoeffRecursion)->Range(1 << 10, 1 << 17)->Complexity();

void BM_ToeplitzMatvecFFT(benchmark::State& state) {
  const int nx = static_cast<int>(state.range(0));
  const fgl::Grid1D g = fgl::Grid1D::make(-1.0, 1.0, nx);
  const fgl::DiscreteOperator op = fgl::DiscreteOperator::assemble(1.5, g);
  fgl::Rng rng(1);
  fgl::VecC u(g.interior());
  for (int j = 0; j < g.interior(); ++j) u[j] = rng.cnormal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(op.apply_B(u));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ToeplitzMatvecFFT)->Range(1 << 7, 1 << 13)->Complexity();

void BM_ToeplitzMatvecDirect(benchmark::State& state) {
  const int nx = static_cast<int>(state.range(0));
  const fgl::Grid1D g = fgl::Grid1D::make(-1.0, 1.0, nx);
  const fgl::DiscreteOperator op = fgl::DiscreteOperator::assemble(1.5, g);
  fgl::Rng rng(1);
  fgl::VecC u(g.interior());
  for (int j = 0; j < g.interior(); ++j) u[j] = rng.cnormal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(op.apply_B_direct(u));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ToeplitzMatvecDirect)->Range(1 << 7, 1 << 11)->Complexity();

void BM_SolverStep(benchmark::State& state) {
  const int nx = static_cast<int>(state.range(0));
  fgl::ModelParams p = fgl::table2_params(1.5);
  const fgl::Grid1D g = fgl::Grid1D::make(p.a, p.b, nx);
  const fgl::DiscreteOperator op = fgl::DiscreteOperator::assemble(p.alpha, g);
  const fgl::StepMatrices mats(op, p, 1.0 / 100.0, /*dense_limit=*/0);
  const fgl::FieldPair f =
      fgl::init_fields(g, fgl::example2_initial, fgl::example2_initial);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fgl::step(f, nullptr, mats, p));
  }
}
BENCHMARK(BM_SolverStep)->Range(1 << 6, 1 << 10);

void BM_FracSeminorm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  fgl::Rng rng(7);
  fgl::VecC u(n);
  for (int j = 0; j < n; ++j) u[j] = rng.cnormal();
  const double h = 1.0 / (n + 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fgl::frac_seminorm(u, h, 0.75));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FracSeminorm)->Range(1 << 7, 1 << 14)->Complexity();

}  // namespace

BENCHMARK_MAIN();
