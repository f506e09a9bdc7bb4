// Throughput benchmarks for the hot paths: rate evaluation, single steps,
// full-series simulation, and trace parsing.

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "spotsim/engine.hpp"
#include "spotsim/rates.hpp"
#include "spotsim/trace.hpp"

namespace {

std::vector<double> random_prices(std::size_t n) {
    std::mt19937 rng(20240818);
    std::uniform_real_distribution<double> price(0.0, 1.0);
    std::vector<double> prices(n);
    for (double& p : prices) p = price(rng);
    return prices;
}

void BM_DemandBirthRate(benchmark::State& state) {
    const spotsim::RateParams params;
    const auto prices = random_prices(1024);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(spotsim::demand_birth_rate(prices[i++ & 1023], params));
    }
}
BENCHMARK(BM_DemandBirthRate);

void BM_Step(benchmark::State& state) {
    const spotsim::SimParams params;
    const auto prices = random_prices(1024);
    double d = params.d0;
    double r = params.r0;
    std::size_t i = 0;
    for (auto _ : state) {
        const spotsim::StepResult next = spotsim::step(d, r, prices[i++ & 1023], params);
        d = next.demand;
        r = next.resource;
        benchmark::DoNotOptimize(d);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_Step);

void BM_Simulate(benchmark::State& state) {
    const spotsim::SimParams params;
    const auto prices = random_prices(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(spotsim::simulate(prices, params));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(1000)->Arg(100000);

void BM_ParseCsv(benchmark::State& state) {
    std::string text = "timestamp,price\n";
    char line[64];
    for (int i = 0; i < 10000; ++i) {
        std::snprintf(line, sizeof line, "2024-%02d-%02dT%02d:00:00Z,0.0%d\n",
                      (i / 672) % 12 + 1, (i / 24) % 28 + 1, i % 24, i % 9 + 1);
        text += line;
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(spotsim::parse_trace_text(text, "bench", {}));
    }
    state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_ParseCsv);

}  // namespace

BENCHMARK_MAIN();
