#include <benchmark/benchmark.h>

#include "gsa/distributions.hpp"
#include "gsa/estimators.hpp"
#include "gsa/harness.hpp"
#include "gsa/metafunction.hpp"
#include "gsa/metrics.hpp"
#include "gsa/rng.hpp"
#include "gsa/sampling.hpp"

using namespace gsa;

static void BM_SobolScrambled(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sobol_points(n, 200, 7));
    state.SetItemsProcessed(state.iterations() * n * 200);
}
BENCHMARK(BM_SobolScrambled)->Arg(1 << 8)->Arg(1 << 11);

static void BM_BetaQuantile(benchmark::State& state) {
    const auto m = random_points(1024, 1, 3);
    const auto d = DistributionId::beta(0.5, 0.5);
    for (auto _ : state)
        for (std::size_t r = 0; r < m.rows(); ++r) benchmark::DoNotOptimize(quantile(d, m(r, 0)));
    state.SetItemsProcessed(state.iterations() * m.rows());
}
BENCHMARK(BM_BetaQuantile);

static void BM_MetafunctionSwaps(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(0));
    const auto spec = generate_spec(k, 0.5, 0.3, 1);
    const auto A = sobol_points(1024, 2 * k, 1);
    const auto left = A.column_block(0, k), right = A.column_block(k, k);
    const MetafunctionEvaluator ev(spec);
    for (auto _ : state) benchmark::DoNotOptimize(ev.evaluate_swaps(left, right));
}
BENCHMARK(BM_MetafunctionSwaps)->Arg(10)->Arg(100);

static void BM_Jansen(benchmark::State& state) {
    const std::size_t n = 1024, k = 100;
    Rng rng(1);
    EvaluationSet ev;
    ev.yA.resize(n);
    for (auto& x : ev.yA) x = rng.normal();
    ev.yAB.assign(k, ev.yA);
    for (auto& l : ev.yAB)
        for (auto& x : l) x += rng.normal();
    for (auto _ : state) benchmark::DoNotOptimize(jansen_total(ev));
}
BENCHMARK(BM_Jansen);

static void BM_KendallTauB(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(0));
    Rng rng(2);
    std::vector<double> a(k), b(k);
    for (std::size_t i = 0; i < k; ++i) {
        a[i] = rng.uniform();
        b[i] = a[i] + 0.3 * rng.uniform();
    }
    for (auto _ : state) benchmark::DoNotOptimize(rank_agreement(a, b, RankMeasure::kendall_tau_b));
}
BENCHMARK(BM_KendallTauB)->Arg(10)->Arg(100);

static void BM_BenchmarkRow(benchmark::State& state) {
    BenchmarkParams p{2, 1000, static_cast<int>(state.range(0)), 8, 3, 0.4, 0.2, 1};
    const RowSettings s{Mode::rank, 0.2, 10, 11};
    for (auto _ : state) benchmark::DoNotOptimize(run_row(p, s));
}
BENCHMARK(BM_BenchmarkRow)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
