// SPDX-License-Identifier: Apache-2.0
//
// Microbenchmarks for the hot paths: assembly, sparse solves (single vs
// shared factorization), constraint evaluation, and tuple sweeps.
//
//   ./freqcover_bench [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include <vector>

#include "freqcover/coeff.hpp"
#include "freqcover/completeness.hpp"
#include "freqcover/expr.hpp"
#include "freqcover/functional.hpp"
#include "freqcover/grid.hpp"
#include "freqcover/search.hpp"
#include "freqcover/solver.hpp"

namespace {

using freqcover::CoeffSet;
using freqcover::ComplexField;
using freqcover::ConstraintField;
using freqcover::DiscreteSystem;
using freqcover::Expr;
using freqcover::Grid;
using freqcover::InnerMask;

Grid square_grid(int n) { return Grid::create(2, {{0.0, 1.0}, {0.0, 1.0}}, {n, n}); }

std::vector<Expr> square_bcs() {
  return {Expr::parse("1"), Expr::parse("x"), Expr::parse("y")};
}

void BM_Assemble2D(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid grid = square_grid(n);
  const CoeffSet coeffs = CoeffSet::identity(2);
  const Expr bc = Expr::parse("x");
  for (auto _ : state) {
    auto system = freqcover::assemble(grid, coeffs, 7.0, bc);
    benchmark::DoNotOptimize(system.rhs);
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_Assemble2D)->Arg(32)->Arg(64)->Arg(96)->Unit(benchmark::kMillisecond);

void BM_Solve2D(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid grid = square_grid(n);
  const CoeffSet coeffs = CoeffSet::identity(2);
  const Expr bc = Expr::parse("x");
  const DiscreteSystem system = freqcover::assemble(grid, coeffs, 7.0, bc);
  for (auto _ : state) {
    ComplexField u = freqcover::solve(system, grid);
    benchmark::DoNotOptimize(u.values);
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_Solve2D)->Arg(32)->Arg(64)->Arg(96)->Unit(benchmark::kMillisecond);

// d + 1 boundary conditions through one factorization...
void BM_SolveShared(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid grid = square_grid(n);
  const CoeffSet coeffs = CoeffSet::identity(2);
  std::vector<DiscreteSystem> systems;
  for (const Expr& bc : square_bcs())
    systems.push_back(freqcover::assemble(grid, coeffs, 7.0, bc));
  std::vector<const DiscreteSystem*> ptrs;
  for (const auto& s : systems) ptrs.push_back(&s);
  for (auto _ : state) {
    auto fields = freqcover::solve_shared(ptrs, grid);
    benchmark::DoNotOptimize(fields);
  }
}
BENCHMARK(BM_SolveShared)->Arg(64)->Unit(benchmark::kMillisecond);

// ...versus one factorization per boundary condition.
void BM_SolveRepeated(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid grid = square_grid(n);
  const CoeffSet coeffs = CoeffSet::identity(2);
  std::vector<DiscreteSystem> systems;
  for (const Expr& bc : square_bcs())
    systems.push_back(freqcover::assemble(grid, coeffs, 7.0, bc));
  for (auto _ : state) {
    for (const auto& s : systems) {
      ComplexField u = freqcover::solve(s, grid);
      benchmark::DoNotOptimize(u.values);
    }
  }
}
BENCHMARK(BM_SolveRepeated)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ConstraintField(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid grid = square_grid(n);
  const InnerMask mask = InnerMask::create(grid, 0.1);
  const CoeffSet coeffs = CoeffSet::identity(2);
  std::vector<DiscreteSystem> systems;
  for (const Expr& bc : square_bcs())
    systems.push_back(freqcover::assemble(grid, coeffs, 7.0, bc));
  std::vector<const DiscreteSystem*> ptrs;
  for (const auto& s : systems) ptrs.push_back(&s);
  auto fields = freqcover::solve_shared(ptrs, grid);
  for (auto _ : state) {
    auto bundle = freqcover::make_bundle(grid, fields);
    ConstraintField theta = freqcover::constraint_field(grid, mask, bundle);
    benchmark::DoNotOptimize(theta.values);
  }
}
BENCHMARK(BM_ConstraintField)->Arg(64)->Arg(96)->Unit(benchmark::kMillisecond);

void BM_EvaluateTuple(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid grid = square_grid(n);
  const InnerMask mask = InnerMask::create(grid, 0.1);
  const CoeffSet coeffs = CoeffSet::identity(2);
  std::vector<ConstraintField> thetas;
  for (double omega : {5.5, 7.75, 9.25}) {
    std::vector<DiscreteSystem> systems;
    for (const Expr& bc : square_bcs())
      systems.push_back(freqcover::assemble(grid, coeffs, omega, bc));
    std::vector<const DiscreteSystem*> ptrs;
    for (const auto& s : systems) ptrs.push_back(&s);
    auto bundle = freqcover::make_bundle(grid, freqcover::solve_shared(ptrs, grid));
    thetas.push_back(freqcover::constraint_field(grid, mask, bundle));
  }
  const std::vector<const ConstraintField*> tuple{&thetas[0], &thetas[1], &thetas[2]};
  for (auto _ : state) {
    auto report = freqcover::evaluate_tuple(tuple, 1e-3);
    benchmark::DoNotOptimize(report.margin_sum);
  }
}
BENCHMARK(BM_EvaluateTuple)->Arg(64)->Arg(96)->Unit(benchmark::kMillisecond);

void BM_Sweep1D(benchmark::State& state) {
  freqcover::SearchProblem p;
  p.grid = Grid::create(1, {{0.0, 1.0}}, {2000});
  p.mask = InnerMask::create(p.grid, 0.1);
  p.coeffs = CoeffSet::identity(1);
  p.bcs = {Expr::parse("1"), Expr::parse("x")};
  const auto band = freqcover::make_band(5.0, 20.0, freqcover::SpectrumEstimate{}, 0.0);
  const auto cs = freqcover::precompute_fields(p, band, 12);
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto result = freqcover::sweep(cs, k, 1e-3);
    benchmark::DoNotOptimize(result.fraction_complete);
  }
}
BENCHMARK(BM_Sweep1D)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace
