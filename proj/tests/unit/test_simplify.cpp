#include "doctest.h"

#include "subskel/distances.hpp"
#include "subskel/error.hpp"
#include "subskel/simplify.hpp"

#include "../support/oracles.hpp"

using namespace subskel;

namespace {

// True when `s` is a subsequence of `p`'s vertices that keeps both endpoints.
bool is_vertex_subsequence(const Trajectory& p, const Trajectory& s)
{
    std::size_t j = 0;
    for (std::size_t i = 0; i < p.size() && j < s.size(); ++i)
        if (std::equal(s[j].begin(), s[j].end(), p[i].begin()))
            ++j;
    auto same = [](auto a, auto b) { return std::equal(a.begin(), a.end(), b.begin()); };
    return j == s.size() && same(s[0], p[0]) && same(s[s.size() - 1], p[p.size() - 1]);
}

} // namespace

TEST_CASE("epsilon zero removes only exact repeats")
{
    const Trajectory p{{0, 0}, {0, 0}, {1, 0}, {2, 0}, {2, 0}, {3, 1}};
    const auto s = simplify(p, {0.0});
    CHECK(s == Trajectory{{0, 0}, {1, 0}, {2, 0}, {3, 1}});
    CHECK(simplify(Trajectory{{4, 4}}, {0.0}).size() == 1);
}

TEST_CASE("collinear line collapses to its endpoints")
{
    std::vector<double> c;
    for (int i = 0; i < 10; ++i)
        c.insert(c.end(), {double(i), 2.0 * i, -0.5 * i});
    const Trajectory p(3, std::move(c));
    const auto s = simplify(p, {1e-9});
    REQUIRE(s.size() == 2);
    CHECK(is_vertex_subsequence(p, s));
}

TEST_CASE("simplification stays within epsilon under CF")
{
    Rng rng(42);
    for (int trial = 0; trial < 10; ++trial) {
        const auto p = oracle::random_walk(rng, 50, 3, 0.2);
        for (double eps : {0.05, 0.1, 0.3}) {
            const auto s = simplify(p, {eps});
            CHECK(s.size() <= p.size());
            CHECK(is_vertex_subsequence(p, s));
            CHECK(continuous_frechet(p, s) <= eps);
        }
    }
}

TEST_CASE("larger epsilon never keeps more vertices on smooth walks")
{
    Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const auto p = oracle::random_walk(rng, 60, 2, 0.1);
        std::size_t prev = p.size();
        for (double eps : {0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0}) {
            const auto n = simplify(p, {eps}).size();
            CHECK(n <= prev);
            prev = n;
        }
    }
}

TEST_CASE("simplify rejects bad input")
{
    CHECK_THROWS_AS(simplify(Trajectory(2, {}), {0.1}), InputError);
    CHECK_THROWS_AS(simplify(Trajectory{{0, 0}}, {-1.0}), ConfigError);
}
