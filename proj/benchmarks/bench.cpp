// Micro-benchmarks for the numeric and builder hot paths.
#include "hvlab/builder.hpp"
#include "hvlab/configurations.hpp"
#include "hvlab/numeric.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

using namespace hvlab;
using num::cplx;

namespace {

constexpr double pi = std::numbers::pi;

cfg::PeriodicConfiguration random_street(int n) {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        std::vector<cplx> pts;
        std::vector<double> ws;
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            pts.emplace_back(u(rng) + 3.0, u(rng));
            const double w = (i % 2 == 0) ? 1.0 : -1.0;
            ws.push_back(w);
            sum += w;
        }
        ws.back() -= sum;
        if (std::abs(ws.back()) < 1e-6) continue;
        try {
            return cfg::PeriodicConfiguration(pts, ws, cplx(0.7, 0.3),
                                              cfg::PeriodicCase::a);
        } catch (const std::invalid_argument&) {
        }
    }
}

void BM_contour_integral(benchmark::State& state) {
    const auto path = num::ContourPath::circle(cplx(0.0), 1.0);
    for (auto _ : state) {
        auto v = num::integrate_contour(
            [](cplx z) { return 1.0 / z + std::exp(z); }, path);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_contour_integral);

void BM_periodic_forces(benchmark::State& state) {
    const auto c = random_street(int(state.range(0)));
    for (auto _ : state) {
        auto F = cfg::periodic_forces(c);
        benchmark::DoNotOptimize(F);
    }
}
BENCHMARK(BM_periodic_forces)->Arg(8);

void BM_balance_solve(benchmark::State& state) {
    auto seed = cfg::three_lane(-1.5);
    // Slightly detune so the solver has real work per iteration.
    seed.points[0] *= std::exp(cplx(0.0, 0.01));
    for (auto _ : state) {
        auto solved = cfg::balance_solve(seed);
        benchmark::DoNotOptimize(solved);
    }
}
BENCHMARK(BM_balance_solve);

void BM_trace_boundary(benchmark::State& state) {
    const bld::BuilderInput input(cfg::vonkarman_street(0.25), 0.05);
    for (auto _ : state) {
        auto curve = bld::trace_boundary(input, 0, int(state.range(0)));
        benchmark::DoNotOptimize(curve);
    }
}
BENCHMARK(BM_trace_boundary)->Arg(512);

void BM_period_integral(benchmark::State& state) {
    auto pert = cfg::vonkarman_street(0.25);
    pert.points[0] += 0.1;
    const bld::BuilderInput input(pert, 0.01);
    for (auto _ : state) {
        auto v = bld::period_integral(input, 0);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_period_integral);

}  // namespace

BENCHMARK_MAIN();
