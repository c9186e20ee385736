#include "doctest.h"

#include "subskel/error.hpp"
#include "subskel/index.hpp"

#include "../support/oracles.hpp"

using namespace subskel;

namespace {

std::vector<Trajectory> corpus(Rng& rng, std::size_t n)
{
    std::vector<Trajectory> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(oracle::random_walk(rng, 3 + rng.index(6), 2, 0.5));
    return out;
}

// Brute-force k nearest by full distances, sorted by (distance, id).
std::vector<Neighbor> scan(const std::vector<Trajectory>& entries, const DistanceMeasure& m,
                           const Trajectory& q, std::size_t k)
{
    std::vector<Neighbor> all;
    for (std::size_t i = 0; i < entries.size(); ++i)
        all.push_back({i, compute_distance(m, q, entries[i])});
    std::stable_sort(all.begin(), all.end(), [](auto& a, auto& b) { return a.distance < b.distance; });
    all.resize(k);
    return all;
}

} // namespace

TEST_CASE("index answers match a linear scan")
{
    Rng rng(101);
    for (auto kind : {MeasureKind::DF, MeasureKind::CF}) {
        const DistanceMeasure m{kind, 1e-7};
        const auto entries = corpus(rng, 40);
        const MetricIndex index(entries, m, 0, 3);
        CHECK(index.pivots().size() == 7);
        for (int q = 0; q < 15; ++q) {
            const auto query = oracle::random_walk(rng, 3 + rng.index(6), 2, 0.5);
            for (std::size_t k : {1u, 3u, 7u}) {
                const auto got = index.knn(query, k);
                CHECK(got == scan(entries, m, query, k));
                CHECK(got == linear_knn(entries, m, query, k));
            }
        }
    }
}

TEST_CASE("an indexed entry finds itself")
{
    Rng rng(4);
    const auto entries = corpus(rng, 25);
    const MetricIndex index(entries, {MeasureKind::CF, 1e-6}, 4, 9);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto nn = index.knn(entries[i], 1);
        CHECK(nn[0].distance <= 1e-6);
    }
}

TEST_CASE("pivots follow greedy farthest-point selection")
{
    Rng rng(55);
    const DistanceMeasure m{MeasureKind::DF, 0};
    const auto entries = corpus(rng, 20);
    const MetricIndex index(entries, m, 6, 12);
    const auto& piv = index.pivots();
    REQUIRE(piv.size() == 6);
    CHECK(piv[0] == Rng(12).index(20));
    for (std::size_t p = 1; p < piv.size(); ++p) {
        auto min_to_prior = [&](std::size_t e) {
            double best = kInfinity;
            for (std::size_t q = 0; q < p; ++q)
                best = std::min(best, oracle::brute_force_df(entries[e], entries[piv[q]]));
            return best;
        };
        const double chosen = min_to_prior(piv[p]);
        for (std::size_t e = 0; e < entries.size(); ++e)
            CHECK(min_to_prior(e) <= chosen);
    }
    for (std::size_t e = 0; e < entries.size(); ++e)
        for (std::size_t p = 0; p < piv.size(); ++p)
            CHECK(index.pivot_distance(e, p) == discrete_frechet(entries[piv[p]], entries[e]));
}

TEST_CASE("tight far-apart clusters prune most distance computations")
{
    Rng rng(8);
    std::vector<Trajectory> entries;
    for (int c = 0; c < 10; ++c)
        for (int i = 0; i < 20; ++i) {
            auto t = oracle::random_walk(rng, 8, 3, 0.01);
            std::vector<double> coords = t.coords();
            for (auto& v : coords)
                v += 100.0 * c;
            entries.emplace_back(3, std::move(coords));
        }
    const MetricIndex index(entries, {MeasureKind::DF, 0}, 0, 1);
    QueryStats stats;
    const int queries = 20;
    for (int q = 0; q < queries; ++q) {
        auto coords = oracle::random_walk(rng, 8, 3, 0.01).coords();
        for (auto& v : coords)
            v += 100.0 * (q % 10);
        index.knn(Trajectory(3, std::move(coords)), 1, &stats);
    }
    const double per_query = double(stats.distance_computations) / queries;
    CHECK(per_query < 0.25 * entries.size());
}

TEST_CASE("index preconditions")
{
    Rng rng(2);
    const auto entries = corpus(rng, 3);
    CHECK_THROWS_AS(MetricIndex(entries, {MeasureKind::DTW, 0}), ConfigError);
    const MetricIndex one({entries[0]}, {MeasureKind::DF, 0}, 5);
    CHECK(one.pivots().size() == 1);
    CHECK_THROWS_AS(one.knn(entries[1], 2), ConfigError);
    CHECK_THROWS_AS(linear_knn(entries, {MeasureKind::DTW, 0}, entries[0], 0), ConfigError);
}
