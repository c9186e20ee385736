#include "doctest.h"

#include "subskel/dataset_io.hpp"
#include "subskel/distances.hpp"
#include "subskel/error.hpp"
#include "subskel/features.hpp"

#include "../support/oracles.hpp"

using namespace subskel;

namespace {

Skeleton load(const char* file)
{
    return read_skeleton_file(std::string(SUBSKEL_DATA_DIR) + "/skeletons/" + file).skeleton;
}

CanonicalSubSkeleton rel(JointIndex joint, JointIndex ref)
{
    return {"r", ref, {{joint, ref}}};
}

CanonicalSubSkeleton abs_set(JointIndex joint)
{
    return {"a", std::nullopt, {{joint, std::nullopt}}};
}

} // namespace

TEST_CASE("ten-joint body skeleton has 100 unmerged canonical sets")
{
    const auto sk = load("kintrans10.json");
    REQUIRE(sk.size() == 10);
    const auto sets = canonical_subskeletons(sk, false, ReferenceScope::All);
    CHECK(sets.size() == 100);
    CHECK(canonical_subskeletons(sk, false).size() == 100);
    std::size_t absolute = 0;
    for (const auto& c : sets) {
        absolute += !c.reference;
        for (const auto& s : c.singletons)
            CHECK(s.reference != std::optional<JointIndex>(s.joint));
    }
    CHECK(absolute == 10);
}

TEST_CASE("two-joint path enumerates two absolute and two relative sets")
{
    const Skeleton sk({"a", "b"}, {{"a", "b"}}, {"a"});
    CHECK(canonical_subskeletons(sk, false, ReferenceScope::All).size() == 4);
    CHECK(canonical_subskeletons(sk, false, ReferenceScope::Central).size() == 3);
}

TEST_CASE("54-joint hand skeleton merges into 70 canonical sets")
{
    const auto sk = load("lm54.json");
    REQUIRE(sk.size() == 54);
    const auto sets = canonical_subskeletons(sk, true);
    CHECK(sets.size() == 70);
    std::size_t absolute = 0;
    for (const auto& c : sets)
        absolute += !c.reference;
    CHECK(absolute == oracle::chain_set_count(sk));
    CHECK(sets.size() == absolute * (1 + sk.central_joints().size()));
    // The index finger is one set.
    const auto idx = std::find_if(sets.begin(), sets.end(), [&](const auto& c) {
        return c.singletons.front().joint == sk.index_of("R_index_1") && !c.reference;
    });
    REQUIRE(idx != sets.end());
    CHECK(idx->singletons.size() == 4);
}

TEST_CASE("adapted union groups by reference")
{
    // f1 rel joint 2, f2 absolute.
    FeatureTemplate t = make_template({rel(4, 2), abs_set(0)});
    CHECK(t.feature_count() == 2);
    const auto with_neck = adapted_union(t, rel(5, 1));
    CHECK(with_neck.feature_count() == 3);
    const auto same_ref = adapted_union(t, rel(6, 2));
    CHECK(same_ref.feature_count() == 2);
    CHECK(same_ref.groups()[0].singletons.size() == 2);
    CHECK(make_template({abs_set(3)}).feature_count() == 1);
    CHECK_THROWS_AS(adapted_union(t, abs_set(0)), ConfigError);
}

TEST_CASE("group count equals the number of distinct references")
{
    const auto sk = load("kintrans10.json");
    const auto sets = canonical_subskeletons(sk, false, ReferenceScope::All);
    Rng rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        auto order = std::vector<std::size_t>(sets.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        rng.shuffle(order);
        FeatureTemplate t;
        std::set<std::optional<JointIndex>> refs;
        for (std::size_t k = 0; k < 1 + rng.index(20); ++k) {
            t = adapted_union(t, sets[order[k]]);
            refs.insert(sets[order[k]].reference);
            CHECK(t.feature_count() == refs.size());
            CHECK(t.feature_count() <= 1 + sk.size());
        }
    }
}

TEST_CASE("feature extraction and concatenation")
{
    const Skeleton sk({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}}, {"b"});
    std::vector<Frame> frames;
    for (int i = 0; i < 40; ++i)
        frames.push_back({{double(i), 0, 0}, {double(i), 1, 0}, {double(i), 2, 0.5 * i}});
    const FrameSequence seq("x", std::nullopt, 30.0, frames);

    const auto single = extract_feature_trajectories(seq, make_template({abs_set(2)}));
    REQUIRE(single.size() == 1);
    CHECK(single[0].trajectory[7][2] == 3.5);
    CHECK(concat_features(single) == single[0].trajectory);

    const auto constant = extract_feature_trajectories(seq, make_template({rel(0, 1)}));
    for (std::size_t i = 0; i < 40; ++i)
        CHECK(std::vector<double>(constant[0].trajectory[i].begin(), constant[0].trajectory[i].end()) ==
              std::vector<double>{0, -1, 0});

    const CanonicalSubSkeleton three{"all", std::nullopt, {{0, {}}, {1, {}}, {2, {}}}};
    const auto t = make_template({three, rel(2, 1)});
    const auto fts = extract_feature_trajectories(seq, t);
    CHECK(fts[0].trajectory.size() == 40);
    CHECK(fts[0].trajectory.dim() == 9);
    const auto cat = concat_features(fts);
    CHECK(cat.dim() == 12);
    CHECK(extract_feature_trajectories(seq, t)[0].trajectory == fts[0].trajectory);

    std::vector<FeatureTrajectory> mismatched{fts[0], {"short", fts[1].trajectory.slice(0, 3)}};
    CHECK_THROWS_AS(concat_features(mismatched), InputError);
}

TEST_CASE("DF on a concatenation dominates its constituents")
{
    Rng rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t m = 1 + rng.index(5), n = 1 + rng.index(5);
        const FeatureTrajectory a1{"a", oracle::random_trajectory(rng, m, 3)};
        const FeatureTrajectory b1{"b", oracle::random_trajectory(rng, m, 3)};
        const FeatureTrajectory a2{"a", oracle::random_trajectory(rng, n, 3)};
        const FeatureTrajectory b2{"b", oracle::random_trajectory(rng, n, 3)};
        const double whole = oracle::brute_force_df(concat_features({a1, b1}), concat_features({a2, b2}));
        CHECK(whole >= oracle::brute_force_df(a1.trajectory, a2.trajectory));
        CHECK(whole >= oracle::brute_force_df(b1.trajectory, b2.trajectory));
    }
}

TEST_CASE("feature template JSON round trip")
{
    const auto sk = load("lm54.json");
    const auto sets = canonical_subskeletons(sk, true);
    const auto t = make_template({sets[3], sets[20], sets[0], sets[45]});
    const auto j = to_json(t, sk);
    CHECK(template_from_json(j, sk) == t);
    auto tampered = j;
    tampered["groups"] = nlohmann::json::array();
    CHECK_THROWS_AS(template_from_json(tampered, sk), InputError);
}

TEST_CASE("merged sets agree with walked chains")
{
    for (const char* file : {"lm54.json", "kintrans10.json"}) {
        const auto sk = read_skeleton_file(std::string(SUBSKEL_DATA_DIR) + "/skeletons/" + file).skeleton;
        std::vector<std::vector<JointIndex>> merged;
        for (const auto& c : canonical_subskeletons(sk, true))
            if (!c.reference) {
                std::vector<JointIndex> members;
                for (const auto& s : c.singletons)
                    members.push_back(s.joint);
                merged.push_back(members);
            }
        CHECK(merged == oracle::walked_chain_sets(sk));
    }
}
