#include <benchmark/benchmark.h>

#include "wedge/batch.hpp"
#include "wedge/bcp.hpp"
#include "wedge/core.hpp"
#include "wedge/study.hpp"

namespace {

void BM_WedgeProbDoob(benchmark::State& state) {
    const wedge::WedgeParams p(1.0, 2.0, 3.0, 4.0);  // ab_plus = 6
    for (auto _ : state)
        benchmark::DoNotOptimize(wedge::wedge_prob(p).value);
}
BENCHMARK(BM_WedgeProbDoob);

void BM_WedgeProbTheta(benchmark::State& state) {
    const wedge::WedgeParams p(0.5, 0.8, 0.6, 0.9);  // ab_plus < tau_3
    for (auto _ : state)
        benchmark::DoNotOptimize(wedge::wedge_prob(p).value);
}
BENCHMARK(BM_WedgeProbTheta);

void BM_WedgeProbTrivial(benchmark::State& state) {
    const wedge::WedgeParams p(30.0, 30.0, 30.0, 30.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(wedge::wedge_prob(p).value);
}
BENCHMARK(BM_WedgeProbTrivial);

void BM_KolmogorovCdf(benchmark::State& state) {
    double a = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(wedge::kolmogorov_cdf(a));
        a = a < 2.9 ? a + 0.1 : 0.3;
    }
}
BENCHMARK(BM_KolmogorovCdf);

void BM_BatchWedge(benchmark::State& state) {
    const auto table = wedge::random_param_table(
        static_cast<std::size_t>(state.range(0)), 7);
    const int workers = static_cast<int>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(wedge::batch_wedge(table, 3, workers));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BatchWedge)
    ->Args({100000, 1})
    ->Args({1000000, 1})
    ->Args({1000000, 2})
    ->Args({1000000, 4})
    ->Unit(benchmark::kMillisecond);

void BM_BridgeBandProb(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(
            wedge::bridge_band_prob(0.0625, 0.9, 1.1, 1.2, 0.8));
}
BENCHMARK(BM_BridgeBandProb);

void BM_BcpMonteCarlo(benchmark::State& state) {
    std::vector<double> knots, lo, up;
    for (int i = 0; i <= 16; ++i) {
        knots.push_back(i / 16.0);
        lo.push_back(-1.0);
        up.push_back(1.0);
    }
    const wedge::PiecewiseBoundaryPair band(knots, lo, up);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            wedge::bcp_montecarlo(band, 20000, 11, 1).estimate);
    state.SetItemsProcessed(state.iterations() * 20000);
}
BENCHMARK(BM_BcpMonteCarlo)->Unit(benchmark::kMillisecond);

void BM_TermsToConvergence(benchmark::State& state) {
    const auto tuples = wedge::sample_params(512, 3);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& p = tuples[i++ % tuples.size()];
        benchmark::DoNotOptimize(
            wedge::terms_to_convergence(p, 1e-16, wedge::Formula::doob));
        benchmark::DoNotOptimize(
            wedge::terms_to_convergence(p, 1e-16, wedge::Formula::theta_dual));
    }
}
BENCHMARK(BM_TermsToConvergence);

}  // namespace

BENCHMARK_MAIN();
