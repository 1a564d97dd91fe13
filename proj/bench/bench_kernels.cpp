// Serial vs OpenMP comparison for the per-node kernels. Run manually:
//   ./build/bench/bench_kernels [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include <vector>

#include "fiberlp/evolution.hpp"
#include "fiberlp/kernels.hpp"
#include "fiberlp/linalg.hpp"

using namespace fiberlp;

namespace {

struct Blocks {
    std::vector<Matrix> family;
    std::vector<Matrix> inverses;
    std::vector<double> weights;
    cvector x;
    cvector y;
    std::vector<double> terms;

    Blocks(std::size_t n, std::size_t d) {
        SplitMix64 rng(7);
        family.reserve(n);
        inverses.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            family.push_back(random_stable_matrix(rng, d));
            inverses.push_back(inverse(family.back()));
        }
        weights.assign(n, 1.0 / static_cast<double>(n));
        x = random_cvector(rng, n * d);
        y.resize(n * d);
        terms.resize(n);
    }
};

constexpr std::size_t kNodes = 4096;
constexpr std::size_t kDim = 4;

void bm_apply_serial(benchmark::State& state) {
    Blocks b(kNodes, kDim);
    for (auto _ : state) {
        kernels::apply_family_serial(b.family, b.x, b.y);
        benchmark::DoNotOptimize(b.y.data());
    }
}

void bm_apply_parallel(benchmark::State& state) {
    Blocks b(kNodes, kDim);
    for (auto _ : state) {
        kernels::apply_family(b.family, b.x, b.y);
        benchmark::DoNotOptimize(b.y.data());
    }
}

void bm_exp_apply_serial(benchmark::State& state) {
    Blocks b(512, kDim);
    for (auto _ : state) {
        kernels::apply_exp_family_serial(b.family, 0.5, b.x, b.y);
        benchmark::DoNotOptimize(b.y.data());
    }
}

void bm_exp_apply_parallel(benchmark::State& state) {
    Blocks b(512, kDim);
    for (auto _ : state) {
        kernels::apply_exp_family(b.family, 0.5, b.x, b.y);
        benchmark::DoNotOptimize(b.y.data());
    }
}

void bm_resolvent_serial(benchmark::State& state) {
    Blocks b(kNodes, kDim);
    for (auto _ : state) {
        kernels::apply_resolvent_serial(b.family, cplx{2.0, 0.5}, b.x, b.y);
        benchmark::DoNotOptimize(b.y.data());
    }
}

void bm_resolvent_parallel(benchmark::State& state) {
    Blocks b(kNodes, kDim);
    for (auto _ : state) {
        kernels::apply_resolvent(b.family, cplx{2.0, 0.5}, b.x, b.y);
        benchmark::DoNotOptimize(b.y.data());
    }
}

void bm_norm_terms_serial(benchmark::State& state) {
    Blocks b(kNodes, kDim);
    for (auto _ : state) {
        kernels::weighted_norm_terms_serial(b.inverses, b.weights, b.x, kDim, 2.0, b.terms);
        benchmark::DoNotOptimize(kernels::ordered_sum(b.terms));
    }
}

void bm_norm_terms_parallel(benchmark::State& state) {
    Blocks b(kNodes, kDim);
    for (auto _ : state) {
        kernels::weighted_norm_terms(b.inverses, b.weights, b.x, kDim, 2.0, b.terms);
        benchmark::DoNotOptimize(kernels::ordered_sum(b.terms));
    }
}

void bm_evolution_serial(benchmark::State& state) {
    auto grid = std::make_shared<GridMeasure>(GridMeasure::circle(1.0, 512));
    Matrix a(2);
    a(0, 0) = -1.0;
    a(0, 1) = 1.0;
    a(1, 1) = -2.0;
    const EvolutionFamily ev(TimeFamily::constant(a), grid->spacing());
    SplitMix64 rng(3);
    FiberFunction f(grid, 2);
    for (auto& v : f.values()) v = rng.unit_square();
    const double t = 64.0 * grid->spacing();
    for (auto _ : state) {
        const FiberFunction g = evolution_semigroup_apply_serial(ev, t, f);
        benchmark::DoNotOptimize(g.values().data());
    }
}

void bm_evolution_parallel(benchmark::State& state) {
    auto grid = std::make_shared<GridMeasure>(GridMeasure::circle(1.0, 512));
    Matrix a(2);
    a(0, 0) = -1.0;
    a(0, 1) = 1.0;
    a(1, 1) = -2.0;
    const EvolutionFamily ev(TimeFamily::constant(a), grid->spacing());
    SplitMix64 rng(3);
    FiberFunction f(grid, 2);
    for (auto& v : f.values()) v = rng.unit_square();
    const double t = 64.0 * grid->spacing();
    for (auto _ : state) {
        const FiberFunction g = evolution_semigroup_apply(ev, t, f);
        benchmark::DoNotOptimize(g.values().data());
    }
}

BENCHMARK(bm_apply_serial);
BENCHMARK(bm_apply_parallel);
BENCHMARK(bm_exp_apply_serial);
BENCHMARK(bm_exp_apply_parallel);
BENCHMARK(bm_resolvent_serial);
BENCHMARK(bm_resolvent_parallel);
BENCHMARK(bm_norm_terms_serial);
BENCHMARK(bm_norm_terms_parallel);
BENCHMARK(bm_evolution_serial);
BENCHMARK(bm_evolution_parallel);

} // namespace

BENCHMARK_MAIN();
