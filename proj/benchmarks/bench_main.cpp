#include <benchmark/benchmark.h>

#include <cmath>

#include "chirp/classical.hpp"
#include "chirp/propagator.hpp"
#include "chirp/wigner.hpp"

using namespace chirp;

namespace {

Problem ladder_problem(std::size_t n) {
    Problem p;
    p.params = {1e-4, 0.0016, 0.0155, 1.9, ResonanceMode::Subharmonic2};
    p.basis_size = n;
    return p;
}

void BM_AdvanceInteraction(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Propagator prop(ladder_problem(n), Picture::Interaction);
    const double dt = prop.default_dt();
    constexpr std::size_t kSteps = 1000;
    for (auto _ : state) {
        auto s = prop.initial_state();
        prop.advance(s, s.t + dt * kSteps, dt);
        benchmark::DoNotOptimize(s.amps.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * kSteps));
}
BENCHMARK(BM_AdvanceInteraction)->Arg(40)->Arg(250);

void BM_AdvanceSchrodinger(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Propagator prop(ladder_problem(n), Picture::Schrodinger);
    const double dt = prop.default_dt();
    constexpr std::size_t kSteps = 1000;
    for (auto _ : state) {
        auto s = prop.initial_state();
        prop.advance(s, s.t + dt * kSteps, dt);
        benchmark::DoNotOptimize(s.amps.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * kSteps));
}
BENCHMARK(BM_AdvanceSchrodinger)->Arg(40);

StateVector spread_state(std::size_t n) {
    StateVector s;
    s.amps.resize(n);
    double total = 0;
    for (std::size_t k = 0; k < n; ++k) {
        s.amps[k] = std::polar(std::exp(-0.1 * static_cast<double>(k)), 0.7 * static_cast<double>(k));
        total += std::norm(s.amps[k]);
    }
    for (auto& c : s.amps) c /= std::sqrt(total);
    return s;
}

void BM_WignerLaguerre(benchmark::State& state) {
    const auto s = spread_state(static_cast<std::size_t>(state.range(0)));
    const auto grid = PhaseSpaceGrid::fit(s, 101);
    for (auto _ : state) benchmark::DoNotOptimize(wigner_from_state(s, grid).values.data());
}
BENCHMARK(BM_WignerLaguerre)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_WignerOraclePoint(benchmark::State& state) {
    const auto s = spread_state(5);
    for (auto _ : state) benchmark::DoNotOptimize(direct_wigner_point(s, 0.4, -0.3));
}
BENCHMARK(BM_WignerOraclePoint);

void BM_ClassicalRun(benchmark::State& state) {
    const PhysicalParams params{1e-4, 0.0016, 0.0155, 1.9, ResonanceMode::Subharmonic2};
    ClassicalRunConfig run;
    run.tau_end = 0.0;
    for (auto _ : state) benchmark::DoNotOptimize(classical_capture(params, run).final_smoothed_energy);
}
BENCHMARK(BM_ClassicalRun)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
