// Microbenchmarks for the hot paths: position sampling, coupling matrices,
// the cosine-product moment curves that dominate every scan, the oscillatory
// shell integral, curve fitting, and the exact small-system reference.

#include <benchmark/benchmark.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "glassy/couplings.hpp"
#include "glassy/dynamics.hpp"
#include "glassy/ensemble.hpp"
#include "glassy/fitting.hpp"
#include "glassy/quadrature.hpp"

using namespace glassy;

namespace {

CouplingMatrix make_matrix(std::size_t n) {
    SpinConfiguration config = sample_rsa(n, BallGeometry(3, 1.0, 0.0), 1234);
    return coupling_matrix(config, CouplingModel(6.0, 1.0));
}

void BM_SampleRsa(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const BallGeometry geo(3, 1.0, exclusion_radius_for_x(0.01, n, 3, 1.0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        SpinConfiguration c = sample_rsa(n, geo, seed++);
        benchmark::DoNotOptimize(c.positions().data());
    }
}
BENCHMARK(BM_SampleRsa)->Arg(100)->Arg(400)->Arg(1300);

void BM_CouplingMatrix(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    SpinConfiguration config = sample_rsa(n, BallGeometry(3, 1.0, 0.0), 77);
    const CouplingModel model(6.0, 1.0);
    for (auto _ : state) {
        CouplingMatrix m = coupling_matrix(config, model);
        benchmark::DoNotOptimize(m.values().data());
    }
}
BENCHMARK(BM_CouplingMatrix)->Arg(400)->Arg(1300);

// One disorder realization of the scan pipeline: both moments on the standard
// 80-point window.
void BM_MomentCurves(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const CouplingMatrix m = make_matrix(n);
    const double jnn = median_nn_coupling(m);
    const TimeGrid grid = TimeGrid::log_spaced(0.01 / jnn, 50.0 / jnn, 80);
    const std::array<int, 2> js{1, 2};
    for (auto _ : state) {
        auto curves = moment_curves(m, grid, js);
        benchmark::DoNotOptimize(curves[0].values.data());
    }
    state.SetComplexityN(static_cast<std::int64_t>(n));
}
BENCHMARK(BM_MomentCurves)->Arg(100)->Arg(200)->Arg(400)->Arg(800)->Complexity();

void BM_ShellAverage(benchmark::State& state) {
    const double tau = std::pow(10.0, static_cast<double>(state.range(0)));
    for (auto _ : state) {
        ShellAverage avg = shell_cosine_average(3, 6.0, 1.0, 1e-3, 1.0, tau);
        benchmark::DoNotOptimize(avg.value);
    }
}
BENCHMARK(BM_ShellAverage)->Arg(-4)->Arg(-2)->Arg(0);

void BM_StretchedFit(benchmark::State& state) {
    const double gamma = 3.1, beta = 0.44;
    std::vector<double> times, values;
    for (std::size_t i = 0; i < 80; ++i) {
        const double t = (1e-3 / gamma) * std::pow(5e4, static_cast<double>(i) / 79.0);
        times.push_back(t);
        values.push_back(0.5 * std::exp(-std::pow(gamma * t, beta)));
    }
    RelaxationCurve curve;
    curve.grid = TimeGrid(std::move(times));
    curve.values = std::move(values);
    curve.observable = Observable::moment;
    curve.moment_j = 1;
    for (auto _ : state) {
        StretchedExpFit fit = fit_stretched_exponential(curve);
        benchmark::DoNotOptimize(fit.beta);
    }
}
BENCHMARK(BM_StretchedFit);

void BM_ExactOracle(benchmark::State& state) {
    const CouplingMatrix m = make_matrix(12);
    const double jnn = median_nn_coupling(m);
    const TimeGrid grid = TimeGrid::log_spaced(0.01 / jnn, 20.0 / jnn, 50);
    for (auto _ : state) {
        OracleCurves oc = exact_oracle(m, grid);
        benchmark::DoNotOptimize(oc.magnetization.values.data());
    }
}
BENCHMARK(BM_ExactOracle);

}  // namespace

BENCHMARK_MAIN();
