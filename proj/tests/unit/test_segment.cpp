#include "doctest.h"

#include "subskel/error.hpp"
#include "subskel/segment.hpp"

#include "../support/fixtures.hpp"

#include <cmath>

using namespace subskel;

namespace {

const double kPi = std::acos(-1.0);

// One joint circling back to its start `cycles` times over n frames.
FrameSequence circle(std::size_t n, std::size_t cycles)
{
    std::vector<Frame> frames;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = 2 * kPi * double(cycles) * double(i) / double(n);
        frames.push_back({{std::cos(a), std::sin(a), 0}});
    }
    return FrameSequence("o", std::nullopt, 30.0, std::move(frames));
}

} // namespace

TEST_CASE("signal is the distance to the first frame")
{
    const auto s = to_signal(circle(40, 4));
    CHECK(s[0] == 0.0);
    CHECK(s[10] < 1e-12);
    CHECK(s[5] == doctest::Approx(2.0));
    const FrameSequence still("x", std::nullopt, 30.0, std::vector<Frame>(6, Frame{{1, 2, 3}}));
    for (double v : to_signal(still))
        CHECK(v == 0.0);
}

TEST_CASE("dominant frequency counts repetitions")
{
    std::vector<double> sine(300);
    for (std::size_t t = 0; t < sine.size(); ++t)
        sine[t] = std::sin(2 * kPi * 10 * double(t) / 300.0);
    CHECK(estimate_repetitions(sine).repetitions == 10);

    const auto flat = estimate_repetitions(std::vector<double>(20, 3.0));
    CHECK(flat.repetitions == 1);
    CHECK(flat.degenerate);
    CHECK(estimate_repetitions(to_signal(circle(200, 7))).repetitions == 7);
    CHECK_THROWS_AS(estimate_repetitions({1, 2, 3}), InputError);
}

TEST_CASE("cuts land on the period boundaries of a periodic signal")
{
    const auto seq = circle(200, 5);
    const auto seg = cut_segments(seq, 5);
    CHECK_FALSE(seg.uniform_fallback);
    CHECK(seg.cuts == std::vector<std::size_t>{40, 80, 120, 160});
    std::size_t total = 0;
    for (const auto& s : seg.segments)
        total += s.size();
    CHECK(total == seq.size());
    CHECK(seg.segments[0].frames().front() == seq.frames().front());
    CHECK(seg.segments[4].frames().back() == seq.frames().back());

    const auto one = cut_segments(seq, 1);
    REQUIRE(one.segments.size() == 1);
    CHECK(one.segments[0] == seq);
    CHECK_THROWS_AS(cut_segments(seq, 101), InputError);
    CHECK_THROWS_AS(cut_segments(seq, 2, {4, 0.5}), ConfigError);
}

TEST_CASE("synthetic repetitions are counted and partitioned")
{
    const auto spec = fixture::separable_spec(3);
    std::size_t hits = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto rec = generate_repetitions(spec, seed % 4, 10, 0.2, seed);
        const auto est = estimate_repetitions(to_signal(rec));
        hits += est.repetitions == 10;
        const auto seg = cut_segments(rec, 10);
        std::size_t total = 0;
        for (const auto& s : seg.segments)
            total += s.size();
        CHECK(total == rec.size());
        CHECK(seg.segments.size() == 10);
    }
    CHECK(hits >= 9);
}
