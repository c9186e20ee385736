#pragma once

#include "subskel/model.hpp"
#include "subskel/random.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace subskel {

/// A joint whose motion encodes part of the class identity, either in world
/// coordinates or relative to a (possibly moving) reference joint.
struct DiscriminativeJoint {
    JointIndex joint = 0;
    std::optional<JointIndex> reference;
    /// Number of distinct motion patterns this joint cycles through.
    std::size_t levels = 2;
};

enum class LevelAssignment {
    /// Each class is a distinct combination of joint levels.
    Factorial,
    /// Every joint uses level c % levels, so each one alone can tell classes apart.
    Redundant,
};

struct SyntheticSpec {
    Skeleton skeleton;
    /// Neutral pose; generated from the seed when absent.
    std::optional<Frame> rest_pose;
    std::size_t classes = 4;
    std::size_t sequences_per_class = 10;
    std::size_t subjects = 4;
    double frames_mean = 40.0;
    double frames_sd = 0.0;
    double fps = 30.0;
    /// Per-coordinate Gaussian noise.
    double noise_sd = 0.0;
    /// Segment speeds of the time warp vary in [1 - jitter, 1 + jitter].
    double speed_jitter = 0.0;
    /// Per-sequence global offset, Gaussian per axis.
    double translation_sd = 0.0;
    double motion_amplitude = 0.5;
    /// Joints that move randomly per sequence, independent of the class.
    std::vector<JointIndex> wobble_joints;
    double wobble_amplitude = 0.5;
    std::vector<DiscriminativeJoint> discriminative;
    LevelAssignment assignment = LevelAssignment::Factorial;
    std::uint64_t seed = 0;
};

/// Class c uses pattern level (c / prod of earlier levels) % levels for each
/// discriminative joint, so distinct classes differ in at least one joint as
/// long as classes <= product of levels. Every pattern starts and ends at the
/// rest pose. Labels are "c00", "c01", ...; subjects "s0", "s1", ....
/// Throws ConfigError on an invalid spec.
LabeledDataset generate(const SyntheticSpec& spec);

/// One recording of `repetitions` back-to-back performances of class `c`, each
/// played at a speed drawn from [1 - jitter, 1 + jitter] around frames_mean.
FrameSequence generate_repetitions(const SyntheticSpec& spec, std::size_t c, std::size_t repetitions,
                                   double jitter, std::uint64_t seed);

std::string synthetic_label(std::size_t c);

/// Deterministic pose with unit-ish bones grown outward from joint 0.
Frame default_rest_pose(const Skeleton& skeleton, std::uint64_t seed);

} // namespace subskel
