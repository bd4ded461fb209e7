// Microbenchmarks for the hot paths: state evolution, readout training,
// spectral radius estimation, and the comparison filters.

#include <benchmark/benchmark.h>

#include "ssrc/baselines.hpp"
#include "ssrc/generators.hpp"
#include "ssrc/reservoir.hpp"
#include "ssrc/separation.hpp"
#include "ssrc/series.hpp"

namespace {

using namespace ssrc;

TimeSeries bench_series(std::size_t n) {
    NoiseSpec noise;
    noise.family = NoiseFamily::Lognormal;
    noise.target_snr_db = 10.0;
    const TimeSeries q = standardize(gen_lorenz(LorenzParams{}, n)).first;
    return standardize(mix(q, noise, 1).observed).first;
}

void bm_run_states(benchmark::State& state) {
    EsnParams params;
    params.reservoir_size = static_cast<int>(state.range(0));
    params.seed = 1;
    const Reservoir reservoir = build_reservoir(params);
    const TimeSeries x = bench_series(9000);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_states(reservoir, params, x));
    }
}
BENCHMARK(bm_run_states)->Arg(100)->Arg(200)->Arg(400);

void bm_train_readout(benchmark::State& state) {
    EsnParams params;
    params.reservoir_size = static_cast<int>(state.range(0));
    params.seed = 1;
    const Reservoir reservoir = build_reservoir(params);
    const TimeSeries x = bench_series(9000);
    const StateTrajectory traj = run_states(reservoir, params, x);
    const std::span<const double> targets(x.values.data() + 1, 7900);
    for (auto _ : state) {
        benchmark::DoNotOptimize(train_readout(traj.states.leftCols(7900), targets, 1e-6));
    }
}
BENCHMARK(bm_train_readout)->Arg(100)->Arg(200)->Arg(400);

void bm_spectral_radius(benchmark::State& state) {
    EsnParams params;
    params.reservoir_size = static_cast<int>(state.range(0));
    params.seed = 2;
    const Reservoir reservoir = build_reservoir(params);
    for (auto _ : state) {
        benchmark::DoNotOptimize(spectral_radius(reservoir.weights));
    }
}
BENCHMARK(bm_spectral_radius)->Arg(100)->Arg(400);

void bm_full_separation(benchmark::State& state) {
    EsnParams params;
    params.reservoir_size = static_cast<int>(state.range(0));
    params.seed = 3;
    const TimeSeries x = bench_series(9000);
    const Split split = split_series(x, 1000);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ssrc_separate(x, params, split));
    }
}
BENCHMARK(bm_full_separation)->Arg(200);

void bm_lowpass(benchmark::State& state) {
    const TimeSeries x = bench_series(9000);
    for (auto _ : state) {
        benchmark::DoNotOptimize(lowpass(x, 0.25));
    }
}
BENCHMARK(bm_lowpass);

void bm_wavelet(benchmark::State& state) {
    const TimeSeries x = bench_series(9000);
    for (auto _ : state) {
        benchmark::DoNotOptimize(wavelet_denoise(x, WaveletVariant::Soft, 4));
    }
}
BENCHMARK(bm_wavelet);

void bm_median(benchmark::State& state) {
    const TimeSeries x = bench_series(9000);
    for (auto _ : state) {
        benchmark::DoNotOptimize(median_filter(x, 5));
    }
}
BENCHMARK(bm_median);

void bm_adaptive(benchmark::State& state) {
    const TimeSeries x = bench_series(9000);
    for (auto _ : state) {
        benchmark::DoNotOptimize(adaptive_filter(x, 10, 3));
    }
}
BENCHMARK(bm_adaptive);

}  // namespace

BENCHMARK_MAIN();
