#pragma once

#include "subskel/geometry.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace subskel {

using JointIndex = std::size_t;

/// Undirected, connected joint graph.
///
/// Joints are addressed by their position in `joints()`; the string id is kept
/// for file formats and human-readable feature names.
class Skeleton {
public:
    using Edge = std::pair<JointIndex, JointIndex>;

    Skeleton() = default;

    /// Validates the graph. Edges are given by joint id; each pair is stored
    /// with the smaller index first.
    Skeleton(std::vector<std::string> joints,
             const std::vector<std::pair<std::string, std::string>>& edges,
             const std::vector<std::string>& central_joints);

    std::size_t size() const { return joints_.size(); }
    const std::vector<std::string>& joints() const { return joints_; }
    const std::string& name(JointIndex j) const { return joints_.at(j); }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<JointIndex>& central_joints() const { return central_; }
    const std::vector<JointIndex>& neighbors(JointIndex j) const { return adjacency_.at(j); }
    std::size_t degree(JointIndex j) const { return adjacency_.at(j).size(); }

    /// Throws InputError for unknown ids.
    JointIndex index_of(const std::string& id) const;
    std::optional<JointIndex> find(const std::string& id) const;

    friend bool operator==(const Skeleton& a, const Skeleton& b)
    {
        return a.joints_ == b.joints_ && a.edges_ == b.edges_ && a.central_ == b.central_;
    }

private:
    std::vector<std::string> joints_;
    std::vector<Edge> edges_;
    std::vector<JointIndex> central_;
    std::vector<std::vector<JointIndex>> adjacency_;
};

/// One 3D position per skeleton joint, in skeleton joint order.
using Frame = std::vector<Vec3>;

/// Throws InputError when a coordinate is NaN/Inf or the joint count is wrong.
void validate_frame(const Frame& frame, std::size_t joint_count, std::string_view context);

/// A labeled, time-ordered recording of one actor performing one class.
class FrameSequence {
public:
    FrameSequence() = default;
    FrameSequence(std::string label, std::optional<std::string> subject, double fps,
                  std::vector<Frame> frames);

    const std::string& label() const { return label_; }
    const std::optional<std::string>& subject() const { return subject_; }
    double fps() const { return fps_; }
    const std::vector<Frame>& frames() const { return frames_; }
    std::size_t size() const { return frames_.size(); }
    std::size_t joint_count() const { return frames_.empty() ? 0 : frames_.front().size(); }

    /// Same metadata, new frames.
    FrameSequence with_frames(std::vector<Frame> frames) const
    {
        return FrameSequence(label_, subject_, fps_, std::move(frames));
    }

    friend bool operator==(const FrameSequence&, const FrameSequence&) = default;

private:
    std::string label_;
    std::optional<std::string> subject_;
    double fps_ = 30.0;
    std::vector<Frame> frames_;
};

/// Polygonal curve through n >= 1 vertices in R^dim, stored row-major.
class Trajectory {
public:
    Trajectory() = default;
    Trajectory(std::size_t dim, std::vector<double> coords);
    Trajectory(std::initializer_list<std::initializer_list<double>> points);

    static Trajectory from_points(const std::vector<std::vector<double>>& points);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
    bool empty() const { return coords_.empty(); }

    std::span<const double> operator[](std::size_t i) const
    {
        return {coords_.data() + i * dim_, dim_};
    }
    const std::vector<double>& coords() const { return coords_; }

    /// Vertices [first, last] inclusive.
    Trajectory slice(std::size_t first, std::size_t last) const;

    friend bool operator==(const Trajectory&, const Trajectory&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<double> coords_;
};

struct LabeledDataset {
    Skeleton skeleton;
    std::vector<FrameSequence> sequences;
    std::optional<Frame> at_rest_pose;

    /// Throws InputError when a sequence does not cover the skeleton's joints
    /// or has an empty label.
    void validate() const;

    /// Distinct labels in lexicographic order.
    std::vector<std::string> labels() const;

    LabeledDataset subset(std::span<const std::size_t> indices) const;
};

} // namespace subskel
