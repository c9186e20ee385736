#include "doctest.h"

#include "subskel/distances.hpp"
#include "subskel/error.hpp"
#include "subskel/features.hpp"
#include "subskel/normalize.hpp"

#include "../support/fixtures.hpp"

using namespace subskel;

TEST_CASE("generation is deterministic per seed")
{
    const auto spec = fixture::planted_spec(2, 3);
    const auto a = generate(spec);
    const auto b = generate(spec);
    REQUIRE(a.sequences.size() == 12);
    CHECK(a.sequences == b.sequences);
    CHECK(generate(fixture::planted_spec(3, 3)).sequences != a.sequences);
    CHECK(a.labels() == std::vector<std::string>{"c00", "c01", "c02", "c03"});
}

TEST_CASE("noise-free unjittered sequences of a class differ only by translation")
{
    auto spec = fixture::separable_spec(4);
    spec.noise_sd = 0;
    spec.speed_jitter = 0;
    spec.frames_sd = 0;
    spec.translation_sd = 2.0;
    const auto ds = generate(spec);
    const auto anchor = ds.skeleton.index_of("torso");
    const auto a = translate(ds.sequences[0], anchor, FrameMode::FirstFrame);
    const auto b = translate(ds.sequences[1], anchor, FrameMode::FirstFrame);
    CHECK(ds.sequences[0].frames()[0][0] != ds.sequences[1].frames()[0][0]);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.joint_count(); ++j)
            CHECK(norm(a.frames()[i][j] - b.frames()[i][j]) < 1e-12);
}

TEST_CASE("speed jitter moves DTW far more than CF")
{
    auto spec = fixture::separable_spec(6);
    spec.noise_sd = 0;
    spec.speed_jitter = 0.3;
    spec.frames_sd = 6;
    const auto ds = generate(spec);
    const auto lh = ds.skeleton.index_of("left_hand");
    const auto t = make_template({{"lh", std::nullopt, {{lh, std::nullopt}}}});
    auto traj = [&](std::size_t i) { return extract_feature_trajectories(ds.sequences[i], t)[0].trajectory; };
    // Same class, different timing.
    const auto p = traj(0), q = traj(1);
    const double cf = continuous_frechet(p, q);
    const double dtw_value = dtw(p, q);
    CHECK(dtw_value > 0.0);
    CHECK(cf < 0.05 * spec.motion_amplitude);
    CHECK(cf < dtw_value / 10.0);
}

TEST_CASE("repetition recordings and spec validation")
{
    const auto spec = fixture::separable_spec(1);
    const auto rec = generate_repetitions(spec, 2, 10, 0.2, 77);
    CHECK(rec.label() == "c02");
    CHECK(rec.size() > 10 * 20);
    auto bad = spec;
    bad.discriminative.clear();
    CHECK_THROWS_AS(generate(bad), ConfigError);
    bad = spec;
    bad.assignment = LevelAssignment::Factorial;
    bad.discriminative.resize(1);
    bad.discriminative[0].levels = 2;
    CHECK_THROWS_AS(generate(bad), ConfigError);
}

TEST_CASE("wide length spread keeps sequences short but valid")
{
    auto spec = fixture::separable_spec(4);
    spec.frames_mean = 10;
    spec.frames_sd = 30;
    spec.sequences_per_class = 20;
    for (const auto& s : generate(spec).sequences) {
        CHECK(s.size() >= 8);
        CHECK(s.size() < 200);
    }
}
