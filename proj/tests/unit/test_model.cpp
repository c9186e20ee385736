#include "doctest.h"

#include "subskel/dataset_io.hpp"
#include "subskel/error.hpp"
#include "subskel/split.hpp"

#include <filesystem>
#include <map>
#include <sstream>

using namespace subskel;

namespace {

Skeleton chain3()
{
    return Skeleton({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}}, {"b"});
}

LabeledDataset synthetic_set(std::size_t classes, std::size_t per_class)
{
    LabeledDataset ds{chain3(), {}, std::nullopt};
    for (std::size_t c = 0; c < classes; ++c)
        for (std::size_t i = 0; i < per_class; ++i) {
            const double v = static_cast<double>(c * 100 + i);
            ds.sequences.emplace_back("class" + std::to_string(c), "s" + std::to_string(i % 3), 30.0,
                                      std::vector<Frame>{{{v, 0, 0}, {0, v, 0}, {0, 0, v}}});
        }
    return ds;
}

} // namespace

TEST_CASE("skeleton validation")
{
    CHECK_NOTHROW(chain3());
    CHECK_THROWS_AS(Skeleton({"a", "a"}, {{"a", "a"}}, {}), InputError);
    CHECK_THROWS_AS(Skeleton({"a", "b"}, {{"a", "a"}}, {}), InputError);
    CHECK_THROWS_AS(Skeleton({"a", "b", "c"}, {{"a", "b"}}, {}), InputError); // disconnected
    CHECK_THROWS_AS(Skeleton({"a", "b"}, {{"a", "b"}, {"b", "a"}}, {}), InputError);
    CHECK_THROWS_AS(Skeleton({"a", "b"}, {{"a", "b"}}, {"z"}), InputError);
    const auto g = chain3();
    CHECK(g.degree(1) == 2);
    CHECK(g.index_of("c") == 2);
    CHECK(g.central_joints() == std::vector<JointIndex>{1});
}

TEST_CASE("frames and trajectories reject non-finite values")
{
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(FrameSequence("x", std::nullopt, 30.0, {{{nan, 0, 0}}}), InputError);
    CHECK_THROWS_AS(FrameSequence("x", std::nullopt, 30.0, {}), InputError);
    CHECK_THROWS_AS(FrameSequence("x", std::nullopt, 0.0, {{{0, 0, 0}}}), InputError);
    CHECK_THROWS_AS(Trajectory(2, {1.0, nan}), InputError);
    CHECK_THROWS_AS(Trajectory(2, {1.0, 2.0, 3.0}), InputError);
}

TEST_CASE("split: fixed count per class")
{
    // 73 classes x 3 sequences, 2 per class in training
    const auto ds = synthetic_set(73, 3);
    const auto s = split_train_test(ds, FixedCountPerClass{2}, 1);
    CHECK(s.train.sequences.size() == 146);
    CHECK(s.test.sequences.size() == 73);
    CHECK_THROWS_WITH_AS(split_train_test(ds, FixedCountPerClass{4}, 1),
                         doctest::Contains("class0"), InputError);
}

TEST_CASE("split: fraction per class is deterministic and rounds up")
{
    const auto ds = synthetic_set(3, 9);
    const auto a = split_train_test(ds, FractionPerClass{1.0 / 3.0}, 7);
    const auto b = split_train_test(ds, FractionPerClass{1.0 / 3.0}, 7);
    CHECK(a.train_indices == b.train_indices);
    std::map<std::string, int> per_class;
    for (const auto& s : a.train.sequences)
        ++per_class[s.label()];
    for (const auto& [label, n] : per_class)
        CHECK(n == 3);

    const auto all = split_train_test(ds, FractionPerClass{1.0}, 7);
    CHECK(all.test.sequences.empty());
    CHECK(all.train.sequences == ds.sequences);

    CHECK(fraction_count(0.2, 1) == 1);
    CHECK(fraction_count(0.2, 11) == 3);
    CHECK(fraction_count(1.0 / 3.0, 6) == 2);
}

TEST_CASE("split: every protocol partitions the dataset")
{
    const auto ds = synthetic_set(4, 7);
    for (const SplitSpec& spec : {SplitSpec{FixedCountPerClass{3}}, SplitSpec{FractionPerClass{0.5}},
                                  SplitSpec{CrossSubject{{"s0", "s2"}}}, SplitSpec{KFold{3, 1}}}) {
        for (std::uint64_t seed : {1u, 2u, 99u}) {
            const auto s = split_train_test(ds, spec, seed);
            CHECK(s.train.sequences.size() + s.test.sequences.size() == ds.sequences.size());
            std::vector<bool> seen(ds.sequences.size(), false);
            for (auto i : s.train_indices)
                seen[i] = true;
            for (auto i : s.test_indices) {
                CHECK_FALSE(seen[i]);
                seen[i] = true;
            }
            CHECK(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }));
        }
    }
}

TEST_CASE("split spec parsing")
{
    CHECK(std::get<FixedCountPerClass>(parse_split_spec("count:2")).count == 2);
    CHECK(std::get<FractionPerClass>(parse_split_spec("fraction:0.2")).fraction == 0.2);
    CHECK(std::get<CrossSubject>(parse_split_spec("subjects:a,b")).train_subjects.size() == 2);
    CHECK(std::get<KFold>(parse_split_spec("kfold:5:4")).fold == 4);
    CHECK_THROWS_AS(parse_split_spec("fraction:1.5"), ConfigError);
    CHECK_THROWS_AS(parse_split_spec("kfold:5:5"), ConfigError);
    CHECK_THROWS_AS(parse_split_spec("random"), ConfigError);
    CHECK(to_string(parse_split_spec("kfold:5:4")) == "kfold:5:4");
}

TEST_CASE("dataset files round trip")
{
    auto ds = synthetic_set(2, 2);
    ds.at_rest_pose = Frame{{0, 0, 0}, {0, 1, 0}, {0, 2, 0}};
    const auto dir = std::filesystem::temp_directory_path() / "subskel_io_test";
    std::filesystem::create_directories(dir);
    save_dataset(ds, dir / "d.jsonl", dir / "s.json");
    const auto back = load_dataset(dir / "d.jsonl", dir / "s.json");
    CHECK(back.skeleton == ds.skeleton);
    CHECK(back.sequences == ds.sequences);
    CHECK(back.at_rest_pose == ds.at_rest_pose);
    std::filesystem::remove_all(dir);
}

TEST_CASE("dataset reader reports bad lines")
{
    std::istringstream in(R"({"label":"a","subject":null,"fps":30,"frames":[[[0,0,0]]]}
{"label":"b","fps":30,"frames":[[[0,0]]]}
)");
    CHECK_THROWS_WITH_AS(read_sequences(in), doctest::Contains("line 2"), InputError);

    std::istringstream ok(R"({"label":"a","subject":null,"fps":30,"frames":[[[0,0,0]]]})");
    const auto seqs = read_sequences(ok);
    REQUIRE(seqs.size() == 1);
    CHECK_FALSE(seqs[0].subject().has_value());
}
