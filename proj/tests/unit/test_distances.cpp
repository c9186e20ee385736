#include "doctest.h"

#include "subskel/distances.hpp"
#include "subskel/error.hpp"
#include "subskel/geometry.hpp"

#include "../support/oracles.hpp"

using namespace subskel;

TEST_CASE("discrete Frechet basic values")
{
    const Trajectory p{{0, 0}, {1, 2}, {3, 1}};
    CHECK(discrete_frechet(p, p) == 0.0);
    CHECK(discrete_frechet(Trajectory{{0, 0}}, Trajectory{{3, 4}}) == doctest::Approx(5.0));
    CHECK_THROWS_AS(discrete_frechet(p, Trajectory{{0, 0, 0}}), InputError);
}

TEST_CASE("dtw on unit-offset parallel pairs sums the two matched offsets")
{
    const Trajectory p{{0, 0}, {1, 0}};
    const Trajectory q{{0, 1}, {1, 1}};
    CHECK(dtw(p, q) == doctest::Approx(2.0));
    CHECK(oracle::brute_force_dtw(p, q) == doctest::Approx(2.0));
    CHECK(dtw(p, p) == 0.0);
}

TEST_CASE("coupling DPs match brute force on random pairs")
{
    Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t dim = 1 + rng.index(3);
        const auto p = oracle::random_trajectory(rng, 1 + rng.index(6), dim);
        const auto q = oracle::random_trajectory(rng, 1 + rng.index(6), dim);
        CHECK(discrete_frechet(p, q) == oracle::brute_force_df(p, q));
        CHECK(dtw(p, q) == doctest::Approx(oracle::brute_force_dtw(p, q)).epsilon(1e-12));
        CHECK(dtw(p, q) >= discrete_frechet(p, q));
        CHECK(dtw(p, q) == dtw(q, p));
        CHECK(discrete_frechet(p, q) == discrete_frechet(q, p));
    }
}

TEST_CASE("bounded distances agree below the cutoff")
{
    Rng rng(5);
    for (auto kind : {MeasureKind::CF, MeasureKind::DF, MeasureKind::DTW}) {
        const DistanceMeasure m{kind, 1e-6};
        for (int trial = 0; trial < 30; ++trial) {
            const auto p = oracle::random_walk(rng, 3 + rng.index(8), 2, 0.5);
            const auto q = oracle::random_walk(rng, 3 + rng.index(8), 2, 0.5);
            const double full = compute_distance(m, p, q);
            CHECK(compute_distance_bounded(m, p, q, full * 1.01) == full);
            const double cut = compute_distance_bounded(m, p, q, full * 0.5);
            CHECK((cut == kInfinity || cut == full));
        }
    }
}

TEST_CASE("cf_decision on parallel unit-offset segments")
{
    const Trajectory p{{0, 0}, {2, 0}};
    const Trajectory q{{0, 1}, {2, 1}};
    CHECK(cf_decision(p, q, 1.0));
    CHECK_FALSE(cf_decision(p, q, 0.99));
    CHECK(cf_decision(p, p, 0.0));
    CHECK_FALSE(cf_decision(Trajectory{{0, 0}}, Trajectory{{1, 0}}, 0.0));
    CHECK_FALSE(cf_decision(Trajectory{{0, 0}}, Trajectory{{1, 0}}, -1.0));
}

TEST_CASE("cf_decision respects the endpoint rule")
{
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const auto p = oracle::random_trajectory(rng, 2 + rng.index(5), 2);
        const auto q = oracle::random_trajectory(rng, 2 + rng.index(5), 2);
        const double ends = std::max(oracle::euclid(p, 0, q, 0),
                                     oracle::euclid(p, p.size() - 1, q, q.size() - 1));
        CHECK_FALSE(cf_decision(p, q, ends * 0.999));
    }
}

TEST_CASE("continuous Frechet analytic cases")
{
    const double tol = 1e-6;
    CHECK(continuous_frechet(Trajectory{{0, 0}, {2, 0}}, Trajectory{{0, 1}, {2, 1}}) ==
          doctest::Approx(1.0).epsilon(tol));

    // Point against a segment: the farther endpoint.
    CHECK(continuous_frechet(Trajectory{{0, 0}}, Trajectory{{-1, 1}, {3, 1}}) ==
          doctest::Approx(std::sqrt(10.0)).epsilon(tol));

    // Segment against a detour through (1, h): the apex distance h decides.
    CHECK(continuous_frechet(Trajectory{{0, 0}, {2, 0}}, Trajectory{{0, 0}, {1, 0.5}, {2, 0}}) ==
          doctest::Approx(0.5).epsilon(tol));

    // Back-and-forth excursion: must cover the overshoot (0.5 past x = 1).
    CHECK(continuous_frechet(Trajectory{{0, 0}, {1, 0}}, Trajectory{{0, 0}, {1.5, 0}, {0.5, 0}, {1, 0}}) ==
          doctest::Approx(0.5).epsilon(1e-5));

    const Trajectory p{{0, 0}, {1, 3}, {4, 2}};
    CHECK(continuous_frechet(p, p) == 0.0);
}

TEST_CASE("continuous Frechet is sandwiched by endpoint distance and DF")
{
    Rng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t dim = 1 + rng.index(3);
        const auto p = oracle::random_trajectory(rng, 1 + rng.index(7), dim);
        const auto q = oracle::random_trajectory(rng, 1 + rng.index(7), dim);
        const double cf = continuous_frechet(p, q);
        const double ends = std::max(oracle::euclid(p, 0, q, 0),
                                     oracle::euclid(p, p.size() - 1, q, q.size() - 1));
        CHECK(cf >= ends);
        CHECK(cf <= discrete_frechet(p, q));
        CHECK(cf_decision(p, q, cf * (1 + 1e-6)));
        if (cf > ends)
            CHECK_FALSE(cf_decision(p, q, cf * (1 - 1e-6)));
    }
}

TEST_CASE("rigid motions leave every measure unchanged")
{
    Rng rng(23);
    const Mat3 rot = Mat3::rotation_about({0.3, -1.0, 0.5}, 0.7);
    const Vec3 shift{3.0, -2.0, 5.0};
    auto move = [&](const Trajectory& t) {
        std::vector<double> c;
        for (std::size_t i = 0; i < t.size(); ++i) {
            const Vec3 v = rot.apply({t[i][0], t[i][1], t[i][2]}) + shift;
            c.insert(c.end(), {v.x, v.y, v.z});
        }
        return Trajectory(3, std::move(c));
    };
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = oracle::random_walk(rng, 6, 3);
        const auto q = oracle::random_walk(rng, 5, 3);
        for (auto kind : {MeasureKind::CF, MeasureKind::DF, MeasureKind::DTW}) {
            const DistanceMeasure m{kind, 1e-10};
            const double before = compute_distance(m, p, q);
            const double after = compute_distance(m, move(p), move(q));
            CHECK(std::abs(before - after) <= 1e-9 * std::max(1.0, before));
        }
    }
}

TEST_CASE("midpoint insertion leaves CF unchanged")
{
    Rng rng(29);
    for (int trial = 0; trial < 30; ++trial) {
        const auto p = oracle::random_walk(rng, 5, 2);
        const auto q = oracle::random_walk(rng, 6, 2);
        const std::size_t seg = rng.index(p.size() - 1);
        std::vector<double> c;
        for (std::size_t i = 0; i < p.size(); ++i) {
            c.insert(c.end(), p[i].begin(), p[i].end());
            if (i == seg)
                for (std::size_t k = 0; k < 2; ++k)
                    c.push_back((p[i][k] + p[i + 1][k]) / 2);
        }
        const Trajectory p2(2, std::move(c));
        const double a = continuous_frechet(p, q);
        const double b = continuous_frechet(p2, q);
        CHECK(std::abs(a - b) <= 2e-6 * std::max(a, b));
    }
}

TEST_CASE("parse_measure")
{
    CHECK(parse_measure("CF") == MeasureKind::CF);
    CHECK(parse_measure("dtw") == MeasureKind::DTW);
    CHECK_THROWS_AS(parse_measure("euclid"), ConfigError);
}

TEST_CASE("continuous Frechet is exactly symmetric")
{
    Rng rng(37);
    for (int trial = 0; trial < 50; ++trial) {
        const auto p = oracle::random_walk(rng, 2 + rng.index(6), 3);
        const auto q = oracle::random_walk(rng, 2 + rng.index(6), 3);
        CHECK(continuous_frechet(p, q) == continuous_frechet(q, p));
    }
}
