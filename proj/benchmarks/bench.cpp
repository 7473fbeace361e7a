#include <benchmark/benchmark.h>

#include <cstdint>

#include "bistab/bd.hpp"
#include "bistab/dsl.hpp"
#include "bistab/quasipotential.hpp"
#include "bistab/rng.hpp"
#include "bistab/splitting.hpp"
#include "bistab/ssa.hpp"

namespace {

const char* kDoubleWell =
    "A -> B @ 1\n"
    "B -> A @ 1\n"
    "A + B -> 2B @ 16/3\n"
    "2A + B -> 3A @ 32/3\n";

bistab::ReactionNetwork network() { return bistab::parse_network(kDoubleWell).net; }

// Event loop with the splitting channel dominating (boundary-pinned regime).
void BM_JumpFastRegime(benchmark::State& state) {
    const auto net = network();
    const auto kernel = bistab::SplittingKernel::bernoulli_step();
    const auto spec = bistab::SplitRateSpec::for_kernel(bistab::KernelKind::BernoulliStep,
                                                        bistab::GammaExpr::parse("0.5*N^3"));
    const std::int64_t N = state.range(0);
    bistab::SimulateOptions opts;
    opts.snapshots = 0;
    std::uint64_t events = 0, seed = 1;
    for (auto _ : state) {
        const auto tr = bistab::simulate(net, kernel, spec, N, N / 2, 2.0, seed++, opts);
        events += tr.event_count;
    }
    state.counters["events_per_s"] =
        benchmark::Counter(static_cast<double>(events), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_JumpFastRegime)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

// Event loop for the diffusive normalization used by the large-N experiment.
void BM_JumpDiffusiveRegime(benchmark::State& state) {
    const auto net = network();
    const auto kernel = bistab::SplittingKernel::bernoulli_step();
    const auto spec = bistab::SplitRateSpec::for_kernel(
        bistab::KernelKind::BernoulliStep, bistab::GammaExpr::parse("0.5*N^2"), 0.02);
    const std::int64_t N = 1500;
    bistab::SimulateOptions opts;
    opts.snapshots = 0;
    std::uint64_t events = 0, seed = 1;
    for (auto _ : state) {
        const auto tr = bistab::simulate(net, kernel, spec, N, 3 * N / 4, 1.0, seed++, opts);
        events += tr.event_count;
    }
    state.counters["events_per_s"] =
        benchmark::Counter(static_cast<double>(events), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_JumpDiffusiveRegime)->Unit(benchmark::kMillisecond);

// Reaction-only loop (no splitting channel in the rate table).
void BM_JumpReactionsOnly(benchmark::State& state) {
    const auto net = network();
    const std::int64_t N = state.range(0);
    bistab::SimulateOptions opts;
    opts.snapshots = 0;
    std::uint64_t events = 0, seed = 1;
    for (auto _ : state) {
        const auto tr = bistab::simulate(net, N, N / 2, 1.0, seed++, opts);
        events += tr.event_count;
    }
    state.counters["events_per_s"] =
        benchmark::Counter(static_cast<double>(events), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_JumpReactionsOnly)->Arg(1000)->Unit(benchmark::kMillisecond);

// Full-chain absorption statistics at large N (log-space product solver).
void BM_ChainStatistics(benchmark::State& state) {
    const auto net = network();
    const auto kernel = bistab::SplittingKernel::bernoulli_step();
    const auto spec = bistab::SplitRateSpec::for_kernel(bistab::KernelKind::BernoulliStep,
                                                        bistab::GammaExpr::parse("0.5*N^3"));
    const std::int64_t N = state.range(0);
    const auto model = bistab::build_birth_death(net, kernel, spec, N);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bistab::hitting_prob_all(model));
        benchmark::DoNotOptimize(bistab::expected_hitting_time_all(model));
    }
    state.SetItemsProcessed(state.iterations() * N);
}
BENCHMARK(BM_ChainStatistics)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

// Mode-centered inverse-CDF draw from a wide resampling row.
void BM_KernelSample(benchmark::State& state) {
    const auto kernel = bistab::SplittingKernel::hypergeometric();
    const std::int64_t N = state.range(0);
    bistab::Rng rng(7);
    std::int64_t acc = 0;
    for (auto _ : state) acc += kernel.sample(N / 2, N, rng);
    benchmark::DoNotOptimize(acc);
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_KernelSample)->Arg(1000)->Arg(100000)->Unit(benchmark::kMicrosecond);

// Barrier quadrature for the worked drift (adaptive Gauss-Kronrod).
void BM_BarrierQuadrature(benchmark::State& state) {
    const auto net = network();
    const auto phi = bistab::limiting_drift(net);
    const auto eqr = bistab::find_equilibria(phi);
    const auto sigma_sq = [](double z) { return 0.5 * z * (1.0 - z); };
    for (auto _ : state) {
        benchmark::DoNotOptimize(bistab::barrier_diffusion(phi, sigma_sq, 1.0, *eqr.wells));
    }
}
BENCHMARK(BM_BarrierQuadrature)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
