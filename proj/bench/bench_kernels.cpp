// Serial reference vs OpenMP kernels. Run with OMP_NUM_THREADS set to the
// thread count of interest; the serial variants ignore it.

#include <benchmark/benchmark.h>

#include <map>

#include "ue/coincidence.hpp"
#include "ue/multiwindow.hpp"
#include "ue/serial.hpp"
#include "ue/simulate.hpp"

namespace {

ue::TrialSample sample(std::size_t n, double rate, double T)
{
    ue::Rng rng(1234);
    const ue::PoissonSpec spec{ue::PiecewiseRate::constant(rate, ue::Window(0.0, T))};
    std::vector<ue::TrialPair> trials(n);
    for (auto& tr : trials) tr = ue::TrialPair{ue::gen_poisson(spec, rng), ue::gen_poisson(spec, rng)};
    return ue::TrialSample(std::move(trials), T);
}

const ue::CoincidenceMatrix& matrix(std::size_t n)
{
    static std::map<std::size_t, ue::CoincidenceMatrix> cache;
    auto it = cache.find(n);
    if (it == cache.end()) {
        const auto s = sample(n, 30.0, 0.1);
        it = cache.emplace(n, ue::serial::build_matrix(s, ue::Window(0.0, 0.1), ue::CoincidenceKind::delayed(0.01)))
                 .first;
    }
    return it->second;
}

void delayed_count(benchmark::State& state)
{
    const auto s = sample(2, static_cast<double>(state.range(0)), 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(ue::delayed_count(s[0].x1, s[1].x2, 0.005));
}
BENCHMARK(delayed_count)->Arg(20)->Arg(60)->Arg(200);

template <bool Serial>
void build(benchmark::State& state)
{
    const auto s = sample(static_cast<std::size_t>(state.range(0)), 60.0, 2.0);
    const ue::Window w(0.5, 0.6);
    const auto kind = ue::CoincidenceKind::delayed(0.01);
    for (auto _ : state) {
        if constexpr (Serial)
            benchmark::DoNotOptimize(ue::serial::build_matrix(s, w, kind));
        else
            benchmark::DoNotOptimize(ue::build_matrix(s, w, kind));
    }
}
BENCHMARK(build<true>)->Name("build_matrix/serial")->Arg(50)->Arg(200);
BENCHMARK(build<false>)->Name("build_matrix/openmp")->Arg(50)->Arg(200);

template <bool Serial>
void replicates(benchmark::State& state)
{
    const auto scheme = static_cast<ue::ResampleScheme>(state.range(0));
    const auto& m = matrix(50);
    for (auto _ : state) {
        if constexpr (Serial)
            benchmark::DoNotOptimize(ue::serial::replicate_U(m, scheme, 2000, 7));
        else
            benchmark::DoNotOptimize(ue::replicate_U(m, scheme, 2000, 7));
    }
}
// 0 = trial shuffle, 1 = full bootstrap, 2 = permutation
BENCHMARK(replicates<true>)->Name("replicate_U/serial")->DenseRange(0, 2);
BENCHMARK(replicates<false>)->Name("replicate_U/openmp")->DenseRange(0, 2);

template <bool Serial>
void windows(benchmark::State& state)
{
    const auto s = sample(50, 60.0, 2.0);
    const auto family = ue::sliding_windows(2.0, 0.1, 0.01);
    for (auto _ : state) {
        if constexpr (Serial)
            benchmark::DoNotOptimize(ue::serial::permutation_window_pvalues(s, family, 0.01, 500, 3));
        else
            benchmark::DoNotOptimize(ue::permutation_window_pvalues(s, family, 0.01, 500, 3));
    }
}
BENCHMARK(windows<true>)->Name("permutation_windows/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(windows<false>)->Name("permutation_windows/openmp")->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
