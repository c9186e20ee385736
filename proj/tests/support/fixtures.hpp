#pragma once

#include "subskel/dataset_io.hpp"
#include "subskel/split.hpp"
#include "subskel/synthetic.hpp"

#include <string>

namespace subskel::fixture {

inline Skeleton body10()
{
    return read_skeleton_file(std::string(SUBSKEL_DATA_DIR) + "/skeletons/kintrans10.json").skeleton;
}

/// Separable four-class data on the ten-joint body: the left hand and the
/// left elbow (relative to the neck) each carry the class; everything else is
/// static with light noise.
inline SyntheticSpec separable_spec(std::uint64_t seed = 1)
{
    SyntheticSpec s;
    s.skeleton = body10();
    s.classes = 4;
    s.sequences_per_class = 8;
    s.frames_mean = 30;
    s.frames_sd = 4;
    s.noise_sd = 0.005;
    s.speed_jitter = 0.2;
    s.discriminative = {{s.skeleton.index_of("left_hand"), std::nullopt, 4},
                        {s.skeleton.index_of("left_elbow"), s.skeleton.index_of("neck"), 4}};
    s.assignment = LevelAssignment::Redundant;
    s.seed = seed;
    return s;
}

} // namespace subskel::fixture

namespace subskel::fixture {

/// Four classes from two cues: the right hand's absolute motion (three
/// patterns) and the left elbow's motion relative to the left hand (two
/// patterns). Neither cue alone separates all classes. Every other joint, the
/// left hand included, wobbles strongly, so no other set carries either cue
/// cleanly.
inline SyntheticSpec planted_spec(std::uint64_t seed, std::size_t per_class = 12)
{
    SyntheticSpec s;
    s.skeleton = body10();
    const auto j = [&](const char* n) { return s.skeleton.index_of(n); };
    s.classes = 4;
    s.sequences_per_class = per_class;
    s.frames_mean = 30;
    s.frames_sd = 5;
    s.noise_sd = 0.01;
    s.speed_jitter = 0.2;
    s.motion_amplitude = 0.5;
    s.wobble_amplitude = 2.0;
    for (JointIndex k = 0; k < s.skeleton.size(); ++k)
        if (k != j("right_hand") && k != j("left_elbow"))
            s.wobble_joints.push_back(k);
    s.discriminative = {{j("right_hand"), std::nullopt, 3}, {j("left_elbow"), j("left_hand"), 2}};
    s.seed = seed;
    return s;
}

} // namespace subskel::fixture
