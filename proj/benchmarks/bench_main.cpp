#include <benchmark/benchmark.h>

#include <random>

#include "cohprobe/discord.hpp"
#include "cohprobe/ed.hpp"
#include "cohprobe/kitaev.hpp"
#include "cohprobe/quantum.hpp"
#include "cohprobe/tfim.hpp"

using namespace cohprobe;

static void BM_TfimThermalObservables(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(tfim::thermal_observables(0.9, 0.3));
}
BENCHMARK(BM_TfimThermalObservables);

static void BM_KitaevCorrelator(benchmark::State& state) {
  const double jx = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kitaev::xx_link_correlator(kitaev::KitaevPoint::on_path(jx)));
  }
}
BENCHMARK(BM_KitaevCorrelator)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);

static void BM_Coherence(benchmark::State& state) {
  const auto rho = quantum::reconstruct_two_site(tfim::thermal_two_site(1.0, 0.3));
  for (auto _ : state) benchmark::DoNotOptimize(quantum::coherence(rho));
}
BENCHMARK(BM_Coherence);

static void BM_DiscordAnalytic(benchmark::State& state) {
  const discord::XState x(quantum::reconstruct_two_site(tfim::thermal_two_site(1.0, 0.3)));
  for (auto _ : state) benchmark::DoNotOptimize(discord::discord_analytic(x));
}
BENCHMARK(BM_DiscordAnalytic);

static void BM_DiscordBruteForce(benchmark::State& state) {
  const discord::XState x(quantum::reconstruct_two_site(tfim::thermal_two_site(1.0, 0.3)));
  for (auto _ : state) benchmark::DoNotOptimize(discord::discord_bruteforce(x, 181));
}
BENCHMARK(BM_DiscordBruteForce)->Unit(benchmark::kMillisecond);

static void BM_EdGibbs(benchmark::State& state) {
  ed::ChainSpec s;
  s.n_sites = static_cast<int>(state.range(0));
  s.lambda = 1.0;
  s.kBT = 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(ed::gibbs_observables(s));
}
BENCHMARK(BM_EdGibbs)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
