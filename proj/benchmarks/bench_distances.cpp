#include "subskel/distances.hpp"
#include "subskel/index.hpp"
#include "subskel/random.hpp"
#include "subskel/simplify.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace subskel;

Trajectory walk(Rng& rng, std::size_t n, std::size_t dim)
{
    std::vector<double> coords(n * dim);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < dim; ++k)
            coords[i * dim + k] = (i ? coords[(i - 1) * dim + k] : 0.0) + rng.normal(0.0, 1.0);
    return Trajectory(dim, std::move(coords));
}

void pair_args(benchmark::internal::Benchmark* b)
{
    for (long n : {16, 64, 256})
        b->Arg(n);
}

void BM_DiscreteFrechet(benchmark::State& state)
{
    Rng rng(1);
    const auto n = std::size_t(state.range(0));
    const auto p = walk(rng, n, 6), q = walk(rng, n, 6);
    for (auto _ : state)
        benchmark::DoNotOptimize(discrete_frechet(p, q));
}
BENCHMARK(BM_DiscreteFrechet)->Apply(pair_args);

void BM_Dtw(benchmark::State& state)
{
    Rng rng(2);
    const auto n = std::size_t(state.range(0));
    const auto p = walk(rng, n, 6), q = walk(rng, n, 6);
    for (auto _ : state)
        benchmark::DoNotOptimize(dtw(p, q));
}
BENCHMARK(BM_Dtw)->Apply(pair_args);

void BM_ContinuousFrechet(benchmark::State& state)
{
    Rng rng(3);
    const auto n = std::size_t(state.range(0));
    const auto p = walk(rng, n, 6), q = walk(rng, n, 6);
    for (auto _ : state)
        benchmark::DoNotOptimize(continuous_frechet(p, q));
}
BENCHMARK(BM_ContinuousFrechet)->Apply(pair_args)->Unit(benchmark::kMicrosecond);

void BM_CfDecision(benchmark::State& state)
{
    Rng rng(4);
    const auto n = std::size_t(state.range(0));
    const auto p = walk(rng, n, 6), q = walk(rng, n, 6);
    const double eps = continuous_frechet(p, q);
    for (auto _ : state)
        benchmark::DoNotOptimize(cf_decision(p, q, eps));
}
BENCHMARK(BM_CfDecision)->Apply(pair_args);

void BM_Simplify(benchmark::State& state)
{
    Rng rng(5);
    const auto p = walk(rng, std::size_t(state.range(0)), 6);
    for (auto _ : state)
        benchmark::DoNotOptimize(simplify(p, {1.0}));
}
BENCHMARK(BM_Simplify)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

// 1NN over 500 walks of 40 frames; arg 0 scans linearly, arg 1 uses the index.
void BM_NearestNeighbor(benchmark::State& state)
{
    Rng rng(6);
    std::vector<Trajectory> corpus;
    for (int i = 0; i < 500; ++i)
        corpus.push_back(walk(rng, 40, 6));
    const DistanceMeasure measure{MeasureKind::DF};
    const MetricIndex index(corpus, measure);
    std::vector<Trajectory> queries;
    for (int i = 0; i < 16; ++i)
        queries.push_back(walk(rng, 40, 6));
    std::size_t q = 0;
    for (auto _ : state) {
        const auto& query = queries[q++ % queries.size()];
        if (state.range(0) == 0)
            benchmark::DoNotOptimize(linear_knn(corpus, measure, query, 1));
        else
            benchmark::DoNotOptimize(index.knn(query, 1));
    }
}
BENCHMARK(BM_NearestNeighbor)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
