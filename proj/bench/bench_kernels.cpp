// OpenMP finite-difference kernels against their serial references, plus the
// two exact 3D hypervolume paths.

#include "layered/ascent.hpp"
#include "layered/benchmarks.hpp"
#include "layered/rng.hpp"

#include <benchmark/benchmark.h>

using namespace layered;

namespace {

struct Fixture {
    PointSet X;
    FeasibleRegion region = FeasibleRegion::simplex();
    Surrogate surrogate;
    SetFunction J;

    explicit Fixture(std::size_t H, BaseIndicator base)
        : X(das_dennis(H, 0.01, 8)),
          surrogate{[base] {
                        SurrogateConfig c;
                        c.base = base;
                        return c;
                    }(),
                    ProblemSpec::supersphere(1.0).objective_map()},
          J([this](const PointSet& s) { return surrogate.value(s); }) {}
};

template <bool Parallel>
void fd_gradient(benchmark::State& state) {
    const Fixture f(static_cast<std::size_t>(state.range(0)),
                    state.range(1) ? BaseIndicator::Hypervolume : BaseIndicator::Magnitude);
    for (auto _ : state) {
        auto G = Parallel ? fd_set_gradient(f.X, f.J, f.region, 1e-6) : fd_set_gradient_serial(f.X, f.J, f.region, 1e-6);
        benchmark::DoNotOptimize(G.flat().data());
    }
    state.counters["mu"] = static_cast<double>(f.X.size());
}

void fd_args(benchmark::internal::Benchmark* b) {
    for (int H : {3, 4, 6, 8})
        for (int base : {0, 1}) b->Args({H, base});
    b->ArgNames({"H", "hv"})->Unit(benchmark::kMillisecond)->UseRealTime();
}

PointSet random_front(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    PointSet p(3);
    for (std::size_t i = 0; i < n; ++i) p.push_back({rng.uniform(), rng.uniform(), rng.uniform()});
    return p;
}

void hv3d_inclusion_exclusion(benchmark::State& state) {
    const auto P = random_front(static_cast<std::size_t>(state.range(0)), 3);
    const Anchor O = Anchor::origin(3);
    for (auto _ : state) benchmark::DoNotOptimize(hv_inclusion_exclusion(P, O));
}

void hv3d_sweep(benchmark::State& state) {
    const auto P = random_front(static_cast<std::size_t>(state.range(0)), 3);
    const Anchor O = Anchor::origin(3);
    for (auto _ : state) benchmark::DoNotOptimize(hv_3d_sweep(P, O));
}

}  // namespace

BENCHMARK(fd_gradient<true>)->Name("fd_set_gradient/openmp")->Apply(fd_args);
BENCHMARK(fd_gradient<false>)->Name("fd_set_gradient/serial")->Apply(fd_args);
BENCHMARK(hv3d_inclusion_exclusion)->DenseRange(2, 12, 2);
BENCHMARK(hv3d_sweep)->DenseRange(2, 12, 2)->Arg(50)->Arg(200);

BENCHMARK_MAIN();
