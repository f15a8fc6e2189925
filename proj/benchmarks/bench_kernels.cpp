#include <benchmark/benchmark.h>

#include "synthbench/baselines.hpp"
#include "synthbench/fidelity.hpp"
#include "synthbench/kernels.hpp"
#include "synthbench/logistic.hpp"
#include "synthbench/parallel.hpp"
#include "synthbench/privacy.hpp"
#include "synthbench/rng.hpp"

using namespace synthbench;

namespace {

PhenotypeMatrix bench_matrix(std::uint64_t seed, std::size_t n, std::size_t k, double lo, double hi) {
    const Rng root(seed);
    std::vector<PhenotypeMatrix::Row> rows(n);
    std::vector<std::string> codes;
    for (std::size_t j = 0; j < k; ++j) codes.push_back("B" + std::to_string(j));
    for (std::size_t j = 0; j < k; ++j) {
        const Rng col = root.stream(j);
        const double p = lo + (hi - lo) * col.unit_at(0);
        for (std::size_t i = 0; i < n; ++i) {
            if (col.unit_at(i + 1) < p) rows[i].push_back(static_cast<std::uint32_t>(j));
        }
    }
    return PhenotypeMatrix(Vocabulary(std::move(codes)), std::move(rows));
}

}  // namespace

static void BM_CooccurrenceCounts(benchmark::State& state) {
    const PhenotypeMatrix m =
        bench_matrix(1, static_cast<std::size_t>(state.range(0)), 200, 0.01, 0.15);
    set_worker_budget(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cooccurrence_counts(m));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CooccurrenceCounts)->Arg(2000)->Arg(10000);

static void BM_PearsonCorrelation(benchmark::State& state) {
    const PhenotypeMatrix m =
        bench_matrix(2, static_cast<std::size_t>(state.range(0)), 200, 0.01, 0.15);
    set_worker_budget(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pearson_correlation(m));
    }
}
BENCHMARK(BM_PearsonCorrelation)->Arg(2000)->Arg(10000);

static void BM_MirScan(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const PhenotypeMatrix real = bench_matrix(3, n, 500, 0.02, 0.1);
    const PhenotypeMatrix syn = bench_matrix(4, n, 500, 0.02, 0.1);
    set_worker_budget(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mir(real, syn));
    }
    state.SetItemsProcessed(state.iterations() * n * n);  // row-pair scans
}
BENCHMARK(BM_MirScan)->Arg(1000)->Arg(2000);

static void BM_AirMatch(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const PhenotypeMatrix real = bench_matrix(5, n, 200, 0.05, 0.4);
    const PhenotypeMatrix syn = bench_matrix(6, n, 200, 0.05, 0.4);
    set_worker_budget(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(air(real, syn));
    }
}
BENCHMARK(BM_AirMatch)->Arg(1000)->Arg(2000);

static void BM_GeneratePbr(benchmark::State& state) {
    const PhenotypeMatrix real = bench_matrix(7, 1000, 200, 0.01, 0.2);
    const std::vector<double> prev = prevalence(real);
    set_worker_budget(1);
    GenerationConfig cfg;
    cfg.target_size = static_cast<std::uint64_t>(state.range(0));
    cfg.seed = 11;
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate_pbr(prev, real.vocab(), cfg));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GeneratePbr)->Arg(10000)->Arg(50000);

static void BM_GenerateResample(benchmark::State& state) {
    const PhenotypeMatrix real = bench_matrix(8, 2000, 200, 0.01, 0.2);
    set_worker_budget(1);
    GenerationConfig cfg;
    cfg.target_size = static_cast<std::uint64_t>(state.range(0));
    cfg.seed = 13;
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate_resample(real, cfg));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateResample)->Arg(10000)->Arg(50000);

static void BM_LogisticFit(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const std::size_t p = 100;
    Rng rng(17);
    Eigen::MatrixXd x(n, p);
    Eigen::VectorXd y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double eta = -1.0;
        for (std::size_t j = 0; j < p; ++j) {
            x(i, j) = rng.next_double() < 0.1 ? 1.0 : 0.0;
            eta += (j % 7 == 0 ? 0.4 : -0.05) * x(i, j);
        }
        y(i) = rng.next_double() < 1.0 / (1.0 + std::exp(-eta)) ? 1.0 : 0.0;
    }
    LogisticOptions opts;
    opts.l2 = 1e-4 * static_cast<double>(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_logistic(x, y, opts));
    }
}
BENCHMARK(BM_LogisticFit)->Arg(2000)->Arg(8000);

BENCHMARK_MAIN();
