#pragma once

#include "subskel/model.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

namespace subskel {

// Dataset files:
//
//   skeleton.json  {"joints": [...], "edges": [["a","b"], ...],
//                   "central_joints": [...], "at_rest_pose": [[x,y,z], ...] (optional)}
//   data.jsonl     one sequence per line:
//                  {"label": "...", "subject": "..."|null, "fps": 30,
//                   "frames": [[[x,y,z], ...one per joint...], ...]}
//
// Joint order in frames and the at-rest pose follows "joints". Values may be
// written with any precision and are read as doubles.

struct SkeletonFile {
    Skeleton skeleton;
    std::optional<Frame> at_rest_pose;
};

nlohmann::json frame_to_json(const Frame& frame);
Frame frame_from_json(const nlohmann::json& j);

nlohmann::json skeleton_to_json(const Skeleton& skeleton,
                                const std::optional<Frame>& at_rest_pose = std::nullopt);
SkeletonFile skeleton_from_json(const nlohmann::json& j);

nlohmann::json sequence_to_json(const FrameSequence& seq);
FrameSequence sequence_from_json(const nlohmann::json& j);

SkeletonFile read_skeleton_file(const std::filesystem::path& path);
void write_skeleton_file(const std::filesystem::path& path, const Skeleton& skeleton,
                         const std::optional<Frame>& at_rest_pose = std::nullopt);

std::vector<FrameSequence> read_sequences(std::istream& in);
std::vector<FrameSequence> read_sequences_file(const std::filesystem::path& path);
void write_sequences(std::ostream& out, const std::vector<FrameSequence>& sequences);
void write_sequences_file(const std::filesystem::path& path,
                          const std::vector<FrameSequence>& sequences);

/// Reads both files and validates the sequences against the skeleton.
LabeledDataset load_dataset(const std::filesystem::path& jsonl, const std::filesystem::path& skeleton);
void save_dataset(const LabeledDataset& dataset, const std::filesystem::path& jsonl,
                  const std::filesystem::path& skeleton);

/// Parses a bare trajectory: a JSON array of equal-length coordinate arrays.
Trajectory trajectory_from_json(const nlohmann::json& j);
nlohmann::json trajectory_to_json(const Trajectory& t);

} // namespace subskel
