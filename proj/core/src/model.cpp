#include "subskel/model.hpp"

#include "subskel/error.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

namespace subskel {

Skeleton::Skeleton(std::vector<std::string> joints,
                   const std::vector<std::pair<std::string, std::string>>& edges,
                   const std::vector<std::string>& central_joints)
    : joints_(std::move(joints))
{
    if (joints_.empty())
        throw InputError("skeleton has no joints");
    {
        std::set<std::string> seen;
        for (const auto& j : joints_)
            if (!seen.insert(j).second)
                throw InputError("duplicate joint id '" + j + "'");
    }
    adjacency_.resize(joints_.size());
    std::set<Edge> seen_edges;
    for (const auto& [a, b] : edges) {
        const JointIndex ia = index_of(a);
        const JointIndex ib = index_of(b);
        if (ia == ib)
            throw InputError("self-loop on joint '" + a + "'");
        const Edge e{std::min(ia, ib), std::max(ia, ib)};
        if (!seen_edges.insert(e).second)
            throw InputError("duplicate edge '" + a + "'-'" + b + "'");
        edges_.push_back(e);
        adjacency_[ia].push_back(ib);
        adjacency_[ib].push_back(ia);
    }
    for (auto& adj : adjacency_)
        std::sort(adj.begin(), adj.end());

    std::vector<bool> visited(joints_.size(), false);
    std::queue<JointIndex> frontier;
    frontier.push(0);
    visited[0] = true;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        const JointIndex j = frontier.front();
        frontier.pop();
        for (JointIndex n : adjacency_[j])
            if (!visited[n]) {
                visited[n] = true;
                ++reached;
                frontier.push(n);
            }
    }
    if (reached != joints_.size())
        throw InputError("skeleton graph is not connected");

    for (const auto& c : central_joints) {
        const JointIndex ic = index_of(c);
        if (std::find(central_.begin(), central_.end(), ic) == central_.end())
            central_.push_back(ic);
    }
}

std::optional<JointIndex> Skeleton::find(const std::string& id) const
{
    const auto it = std::find(joints_.begin(), joints_.end(), id);
    if (it == joints_.end())
        return std::nullopt;
    return static_cast<JointIndex>(it - joints_.begin());
}

JointIndex Skeleton::index_of(const std::string& id) const
{
    if (auto j = find(id))
        return *j;
    throw InputError("unknown joint id '" + id + "'");
}

void validate_frame(const Frame& frame, std::size_t joint_count, std::string_view context)
{
    if (frame.size() != joint_count)
        throw InputError(std::string(context) + ": expected " + std::to_string(joint_count) +
                         " joints, got " + std::to_string(frame.size()));
    for (const auto& p : frame)
        if (!p.finite())
            throw InputError(std::string(context) + ": non-finite coordinate");
}

FrameSequence::FrameSequence(std::string label, std::optional<std::string> subject, double fps,
                             std::vector<Frame> frames)
    : label_(std::move(label)), subject_(std::move(subject)), fps_(fps), frames_(std::move(frames))
{
    if (frames_.empty())
        throw InputError("sequence '" + label_ + "' has no frames");
    if (!(fps_ > 0.0) || !std::isfinite(fps_))
        throw InputError("sequence '" + label_ + "' has non-positive fps");
    const std::size_t joints = frames_.front().size();
    if (joints == 0)
        throw InputError("sequence '" + label_ + "' has empty frames");
    for (std::size_t i = 0; i < frames_.size(); ++i)
        validate_frame(frames_[i], joints, "sequence '" + label_ + "' frame " + std::to_string(i));
}

Trajectory::Trajectory(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords))
{
    if (dim_ == 0)
        throw InputError("trajectory dimension must be positive");
    if (coords_.size() % dim_ != 0)
        throw InputError("trajectory coordinate count is not a multiple of its dimension");
    for (double c : coords_)
        if (!std::isfinite(c))
            throw InputError("trajectory has a non-finite coordinate");
}

Trajectory::Trajectory(std::initializer_list<std::initializer_list<double>> points)
{
    std::vector<std::vector<double>> rows;
    for (const auto& p : points)
        rows.emplace_back(p);
    *this = from_points(rows);
}

Trajectory Trajectory::from_points(const std::vector<std::vector<double>>& points)
{
    if (points.empty())
        throw InputError("trajectory has no vertices");
    const std::size_t dim = points.front().size();
    std::vector<double> coords;
    coords.reserve(points.size() * dim);
    for (const auto& p : points) {
        if (p.size() != dim)
            throw InputError("trajectory vertices have inconsistent dimension");
        coords.insert(coords.end(), p.begin(), p.end());
    }
    return Trajectory(dim, std::move(coords));
}

Trajectory Trajectory::slice(std::size_t first, std::size_t last) const
{
    std::vector<double> c(coords_.begin() + static_cast<std::ptrdiff_t>(first * dim_),
                          coords_.begin() + static_cast<std::ptrdiff_t>((last + 1) * dim_));
    return Trajectory(dim_, std::move(c));
}

void LabeledDataset::validate() const
{
    for (std::size_t i = 0; i < sequences.size(); ++i) {
        const auto& s = sequences[i];
        if (s.label().empty())
            throw InputError("sequence " + std::to_string(i) + " has an empty label");
        if (s.joint_count() != skeleton.size())
            throw InputError("sequence " + std::to_string(i) + " has " +
                             std::to_string(s.joint_count()) + " joints, skeleton has " +
                             std::to_string(skeleton.size()));
    }
    if (at_rest_pose)
        validate_frame(*at_rest_pose, skeleton.size(), "at-rest pose");
}

std::vector<std::string> LabeledDataset::labels() const
{
    std::set<std::string> labels;
    for (const auto& s : sequences)
        labels.insert(s.label());
    return {labels.begin(), labels.end()};
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const
{
    LabeledDataset out{skeleton, {}, at_rest_pose};
    out.sequences.reserve(indices.size());
    for (std::size_t i : indices)
        out.sequences.push_back(sequences.at(i));
    return out;
}

} // namespace subskel
