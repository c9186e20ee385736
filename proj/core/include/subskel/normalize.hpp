#pragma once

#include "subskel/model.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>
#include <utility>

namespace subskel {

enum class FrameMode { Off, FirstFrame, EveryFrame };

std::string to_string(FrameMode mode);
FrameMode parse_frame_mode(const std::string& text);

struct TranslateSpec {
    FrameMode mode = FrameMode::Off;
    std::string anchor;
};

/// The heading pair (from -> to) is rotated onto +x and the up pair onto the
/// +y half of the xy-plane.
struct RotateSpec {
    FrameMode mode = FrameMode::Off;
    std::pair<std::string, std::string> heading;
    std::pair<std::string, std::string> up;
};

struct LimbSpec {
    bool enabled = false;
    std::string root;
};

/// Applied in the fixed order translate -> rotate -> standardize limbs -> pad.
struct NormalizationSpec {
    TranslateSpec translate;
    RotateSpec rotate;
    LimbSpec limbs;
    bool at_rest_pad = false;

    bool is_identity() const
    {
        return translate.mode == FrameMode::Off && rotate.mode == FrameMode::Off &&
               !limbs.enabled && !at_rest_pad;
    }
    /// Short human-readable tag, e.g. "translate(first:neck)+pad".
    std::string describe() const;
};

nlohmann::json to_json(const NormalizationSpec& spec);
NormalizationSpec normalization_from_json(const nlohmann::json& j);

/// Throws ConfigError when referenced joints are missing or padding is
/// requested without an at-rest pose.
void validate(const NormalizationSpec& spec, const Skeleton& skeleton, bool has_at_rest_pose);

/// Mean bone length per skeleton edge, keyed by the stored edge.
using StandardLengths = std::map<Skeleton::Edge, double>;

nlohmann::json to_json(const StandardLengths& lengths, const Skeleton& skeleton);
StandardLengths standard_lengths_from_json(const nlohmann::json& j, const Skeleton& skeleton);

FrameSequence translate(const FrameSequence& seq, JointIndex anchor, FrameMode mode);

/// Throws InputError naming the frame when a pair vector is zero or the two
/// pair vectors are parallel.
FrameSequence rotate(const FrameSequence& seq, std::pair<JointIndex, JointIndex> heading,
                     std::pair<JointIndex, JointIndex> up, FrameMode mode);

/// Walks a BFS tree from `root`, rescaling each bone to its standard length
/// while keeping its direction. Throws InputError on a zero-length bone.
FrameSequence standardize_limbs(const FrameSequence& seq, const Skeleton& skeleton,
                                const StandardLengths& lengths, JointIndex root);

StandardLengths compute_standard_lengths(const LabeledDataset& train);

FrameSequence pad_at_rest(const FrameSequence& seq, const Frame& pose);

/// Resolved normalization pipeline. The at-rest pose goes through the same
/// translate/rotate/standardize steps before it is used for padding.
class Normalizer {
public:
    Normalizer(NormalizationSpec spec, const Skeleton& skeleton, StandardLengths lengths,
               std::optional<Frame> at_rest_pose);

    FrameSequence apply(const FrameSequence& seq) const;

    const NormalizationSpec& spec() const { return spec_; }
    const StandardLengths& lengths() const { return lengths_; }

private:
    FrameSequence apply_rigid(const FrameSequence& seq) const;

    NormalizationSpec spec_;
    const Skeleton* skeleton_;
    StandardLengths lengths_;
    std::optional<Frame> pose_;
    JointIndex anchor_ = 0;
    std::pair<JointIndex, JointIndex> heading_{}, up_{};
    JointIndex root_ = 0;
};

} // namespace subskel
