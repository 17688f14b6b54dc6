#include <benchmark/benchmark.h>

#include <random>

#include "coulomb/analysis.hpp"
#include "coulomb/numerics.hpp"
#include "coulomb/verify.hpp"
#ifdef COULOMB_HAVE_MATRIX
#include "coulomb/eigen_backend.hpp"
#endif

using namespace coulomb;

namespace {

GasModel cauchy(std::size_t n) { return GasModel(Support(SupportKind::RealLine), 2.0, PotentialSpec::cauchy(), n); }

std::vector<Complex> cauchy_points(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::cauchy_distribution<double> d;
  std::vector<Complex> x(n);
  for (auto& p : x) p = d(rng);
  return x;
}

void BM_LogDensity(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = cauchy(n);
  const Configuration c(m, cauchy_points(n, 1));
  for (auto _ : state) benchmark::DoNotOptimize(log_density(c, m));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LogDensity)->RangeMultiplier(4)->Range(16, 1024)->Complexity(benchmark::oNSquared);

void BM_MeasureEnergy(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<Atom<Complex>> atoms;
  for (const auto& p : cauchy_points(n, 2)) atoms.push_back({p, 1.0 / static_cast<double>(n)});
  const PlaneMeasure mu(atoms);
  const auto m = cauchy(1);
  set_thread_count(1);
  for (auto _ : state) benchmark::DoNotOptimize(measure_energy(mu, m).value);
}
BENCHMARK(BM_MeasureEnergy)->Arg(256)->Arg(2048);

// One sweep is N single-particle proposals, each O(N).
void BM_ChainSweeps(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = cauchy(n);
  const auto init = default_initial_configuration(m);
  ChainParams p;
  p.sweeps = 100;
  set_thread_count(1);
  for (auto _ : state) benchmark::DoNotOptimize(mh_chain(m, init, p).samples.size());
  state.counters["sweeps/s"] = benchmark::Counter(static_cast<double>(state.iterations()) * 100.0,
                                                  benchmark::Counter::kIsRate);
}
BENCHMARK(BM_ChainSweeps)->Arg(32)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_GridMinimizeCauchy(benchmark::State& state) {
  const auto m = cauchy(1);
  GridSpec spec;
  spec.resolution = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(grid_minimize(m, spec, SolverOptions{}).gap);
}
BENCHMARK(BM_GridMinimizeCauchy)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_GridMinimizeSpherical(benchmark::State& state) {
  const GasModel m(Support(SupportKind::ComplexPlane), 2.0, PotentialSpec::spherical(), 1);
  GridSpec spec;
  spec.window = 10.0;
  spec.resolution = 20;
  spec.angular_resolution = 20;
  for (auto _ : state) benchmark::DoNotOptimize(grid_minimize(m, spec, SolverOptions{}).gap);
}
BENCHMARK(BM_GridMinimizeSpherical)->Unit(benchmark::kMillisecond)->Iterations(1);

void BM_VerifyIdentities(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(verify_identities().passed());
}
BENCHMARK(BM_VerifyIdentities)->Unit(benchmark::kMillisecond)->Iterations(1);

#ifdef COULOMB_HAVE_MATRIX
void BM_SphericalEnsemble(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_spherical_ensemble(n, seed++, &eigen_backend()).size());
}
BENCHMARK(BM_SphericalEnsemble)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
#endif

}  // namespace

BENCHMARK_MAIN();
