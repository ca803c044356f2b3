#include <benchmark/benchmark.h>

#include <memory>

#include "roughjump/lift.hpp"
#include "roughjump/path.hpp"
#include "roughjump/rrs.hpp"
#include "roughjump/smoothfn.hpp"
#include "roughjump/stochgen.hpp"
#include "roughjump/tensor.hpp"

namespace {

using namespace roughjump;

std::shared_ptr<const RegulatedPath> bench_path(int n, double lambda) {
  GeneratorConfig cfg;
  cfg.seed = 42;
  cfg.N = n;
  cfg.H = 0.4;
  cfg.lambda = lambda;
  return std::make_shared<const RegulatedPath>(gen_mixed(cfg).path);
}

void bm_rank1_power(benchmark::State& state) {
  Vector v(3);
  v << 0.3, -0.7, 1.1;
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rank1_power(v, k));
}
BENCHMARK(bm_rank1_power)->Arg(2)->Arg(4)->Arg(6);

void bm_sym_project(benchmark::State& state) {
  Vector v(3);
  v << 0.3, -0.7, 1.1;
  Vector w(3);
  w << 1.0, 0.2, -0.4;
  const int k = static_cast<int>(state.range(0));
  const DenseTensor t =
      tensor_product(rank1_power(v, k).dense(), rank1_power(w, k).dense());
  for (auto _ : state) benchmark::DoNotOptimize(sym_project(t));
}
BENCHMARK(bm_sym_project)->Arg(1)->Arg(2)->Arg(3);

void bm_pair_rank1(benchmark::State& state) {
  Vector v(3);
  v << 0.3, -0.7, 1.1;
  const int k = static_cast<int>(state.range(0));
  const SymForm f = sym_project_form(rank1_power(v, k).dense());
  for (auto _ : state) benchmark::DoNotOptimize(pair_rank1(f, v));
}
BENCHMARK(bm_pair_rank1)->Arg(2)->Arg(4)->Arg(6);

void bm_p_variation(benchmark::State& state) {
  const auto X = bench_path(static_cast<int>(state.range(0)), 5.0);
  for (auto _ : state) benchmark::DoNotOptimize(X->p_variation(2.5));
}
BENCHMARK(bm_p_variation)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond);

void bm_refine_partition(benchmark::State& state) {
  const auto X = bench_path(static_cast<int>(state.range(0)), 5.0);
  const double eps = X->oscillation(0, X->last_index()) / 16.0;
  for (auto _ : state)
    benchmark::DoNotOptimize(refine_partition(*X, eps, 0.05));
}
BENCHMARK(bm_refine_partition)->Arg(256)->Arg(4096)->Unit(benchmark::kMicrosecond);

void bm_integrate(benchmark::State& state) {
  const auto X = bench_path(static_cast<int>(state.range(0)), 5.0);
  const SmoothFunction F = make_exp();
  const ReducedRoughPath lift(X, 2.5);
  const ControlledPath Y = controlled_from_function(F, lift);
  IntegrateOptions opt;
  opt.record_sewing = false;
  for (auto _ : state) benchmark::DoNotOptimize(rrs_integrate(Y, lift, opt));
}
BENCHMARK(bm_integrate)->Arg(256)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
