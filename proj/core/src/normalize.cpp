#include "subskel/normalize.hpp"

#include "subskel/error.hpp"

#include <queue>

namespace subskel {

using nlohmann::json;

std::string to_string(FrameMode mode)
{
    switch (mode) {
    case FrameMode::Off: return "off";
    case FrameMode::FirstFrame: return "first";
    case FrameMode::EveryFrame: return "every";
    }
    return "?";
}

FrameMode parse_frame_mode(const std::string& text)
{
    if (text == "off")
        return FrameMode::Off;
    if (text == "first" || text == "first-frame")
        return FrameMode::FirstFrame;
    if (text == "every" || text == "every-frame")
        return FrameMode::EveryFrame;
    throw ConfigError("unknown frame mode '" + text + "' (expected off, first or every)");
}

std::string NormalizationSpec::describe() const
{
    std::string out;
    auto add = [&](const std::string& s) { out += (out.empty() ? "" : "+") + s; };
    if (translate.mode != FrameMode::Off)
        add("translate(" + to_string(translate.mode) + ":" + translate.anchor + ")");
    if (rotate.mode != FrameMode::Off)
        add("rotate(" + to_string(rotate.mode) + ")");
    if (limbs.enabled)
        add("limbs(" + limbs.root + ")");
    if (at_rest_pad)
        add("pad");
    return out.empty() ? "none" : out;
}

json to_json(const NormalizationSpec& spec)
{
    return {{"translate", {{"mode", to_string(spec.translate.mode)}, {"anchor", spec.translate.anchor}}},
            {"rotate",
             {{"mode", to_string(spec.rotate.mode)},
              {"heading", {spec.rotate.heading.first, spec.rotate.heading.second}},
              {"up", {spec.rotate.up.first, spec.rotate.up.second}}}},
            {"standard_limbs", {{"enabled", spec.limbs.enabled}, {"root", spec.limbs.root}}},
            {"at_rest_pad", spec.at_rest_pad}};
}

NormalizationSpec normalization_from_json(const json& j)
{
    NormalizationSpec s;
    try {
        if (j.contains("translate")) {
            const auto& t = j.at("translate");
            s.translate.mode = parse_frame_mode(t.value("mode", "off"));
            s.translate.anchor = t.value("anchor", "");
        }
        if (j.contains("rotate")) {
            const auto& r = j.at("rotate");
            s.rotate.mode = parse_frame_mode(r.value("mode", "off"));
            if (r.contains("heading"))
                s.rotate.heading = {r.at("heading").at(0).get<std::string>(),
                                    r.at("heading").at(1).get<std::string>()};
            if (r.contains("up"))
                s.rotate.up = {r.at("up").at(0).get<std::string>(), r.at("up").at(1).get<std::string>()};
        }
        if (j.contains("standard_limbs")) {
            const auto& l = j.at("standard_limbs");
            s.limbs.enabled = l.value("enabled", false);
            s.limbs.root = l.value("root", "");
        }
        s.at_rest_pad = j.value("at_rest_pad", false);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("normalization: ") + e.what());
    }
    return s;
}

void validate(const NormalizationSpec& spec, const Skeleton& skeleton, bool has_at_rest_pose)
{
    auto need = [&](const std::string& id, const char* role) {
        if (!skeleton.find(id))
            throw ConfigError(std::string("normalization ") + role + " joint '" + id +
                              "' is not in the skeleton");
    };
    if (spec.translate.mode != FrameMode::Off)
        need(spec.translate.anchor, "anchor");
    if (spec.rotate.mode != FrameMode::Off) {
        need(spec.rotate.heading.first, "heading");
        need(spec.rotate.heading.second, "heading");
        need(spec.rotate.up.first, "up");
        need(spec.rotate.up.second, "up");
    }
    if (spec.limbs.enabled)
        need(spec.limbs.root, "limb root");
    if (spec.at_rest_pad && !has_at_rest_pose)
        throw ConfigError("at-rest padding requested but the dataset has no at-rest pose");
}

json to_json(const StandardLengths& lengths, const Skeleton& skeleton)
{
    json out = json::array();
    for (const auto& [edge, len] : lengths)
        out.push_back({{"a", skeleton.name(edge.first)}, {"b", skeleton.name(edge.second)}, {"length", len}});
    return out;
}

StandardLengths standard_lengths_from_json(const json& j, const Skeleton& skeleton)
{
    StandardLengths out;
    for (const auto& e : j) {
        const auto a = skeleton.index_of(e.at("a").get<std::string>());
        const auto b = skeleton.index_of(e.at("b").get<std::string>());
        out[{std::min(a, b), std::max(a, b)}] = e.at("length").get<double>();
    }
    return out;
}

FrameSequence translate(const FrameSequence& seq, JointIndex anchor, FrameMode mode)
{
    if (mode == FrameMode::Off)
        return seq;
    std::vector<Frame> frames = seq.frames();
    const Vec3 first = frames.front().at(anchor);
    for (auto& f : frames) {
        const Vec3 origin = mode == FrameMode::FirstFrame ? first : f.at(anchor);
        for (auto& p : f)
            p = p - origin;
    }
    return seq.with_frames(std::move(frames));
}

namespace {

Mat3 facing_rotation(const Frame& f, std::pair<JointIndex, JointIndex> heading,
                     std::pair<JointIndex, JointIndex> up, std::size_t frame_index)
{
    const Vec3 h = f.at(heading.second) - f.at(heading.first);
    const Vec3 u = f.at(up.second) - f.at(up.first);
    const double hn = norm(h);
    const double un = norm(u);
    const std::string where = "frame " + std::to_string(frame_index);
    if (hn == 0.0 || un == 0.0)
        throw InputError("rotation normalization: zero-length reference pair in " + where);
    const Vec3 e1 = h * (1.0 / hn);
    const Vec3 u_perp = u - e1 * dot(u, e1);
    const double pn = norm(u_perp);
    if (pn <= 1e-12 * un)
        throw InputError("rotation normalization: heading and up pairs are parallel in " + where);
    const Vec3 e2 = u_perp * (1.0 / pn);
    return {e1, e2, cross(e1, e2)};
}

} // namespace

FrameSequence rotate(const FrameSequence& seq, std::pair<JointIndex, JointIndex> heading,
                     std::pair<JointIndex, JointIndex> up, FrameMode mode)
{
    if (mode == FrameMode::Off)
        return seq;
    std::vector<Frame> frames = seq.frames();
    const Mat3 first = facing_rotation(frames.front(), heading, up, 0);
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const Mat3 r = mode == FrameMode::FirstFrame ? first : facing_rotation(frames[i], heading, up, i);
        for (auto& p : frames[i])
            p = r.apply(p);
    }
    return seq.with_frames(std::move(frames));
}

FrameSequence standardize_limbs(const FrameSequence& seq, const Skeleton& skeleton,
                                const StandardLengths& lengths, JointIndex root)
{
    // BFS tree over the skeleton: (parent, child) in visiting order.
    std::vector<std::pair<JointIndex, JointIndex>> tree;
    {
        std::vector<bool> seen(skeleton.size(), false);
        std::queue<JointIndex> q;
        q.push(root);
        seen[root] = true;
        while (!q.empty()) {
            const JointIndex j = q.front();
            q.pop();
            for (JointIndex c : skeleton.neighbors(j))
                if (!seen[c]) {
                    seen[c] = true;
                    tree.emplace_back(j, c);
                    q.push(c);
                }
        }
    }
    std::vector<double> target(tree.size());
    for (std::size_t k = 0; k < tree.size(); ++k) {
        const auto [a, b] = tree[k];
        const auto it = lengths.find({std::min(a, b), std::max(a, b)});
        if (it == lengths.end())
            throw ConfigError("no standard length for edge '" + skeleton.name(a) + "'-'" +
                              skeleton.name(b) + "'");
        target[k] = it->second;
    }

    std::vector<Frame> frames;
    frames.reserve(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const Frame& src = seq.frames()[i];
        Frame out = src;
        for (std::size_t k = 0; k < tree.size(); ++k) {
            const auto [parent, child] = tree[k];
            const Vec3 bone = src[child] - src[parent];
            const double len = norm(bone);
            if (len == 0.0)
                throw InputError("limb standardization: zero-length bone '" + skeleton.name(parent) +
                                 "'-'" + skeleton.name(child) + "' in frame " + std::to_string(i));
            out[child] = out[parent] + bone * (target[k] / len);
        }
        frames.push_back(std::move(out));
    }
    return seq.with_frames(std::move(frames));
}

StandardLengths compute_standard_lengths(const LabeledDataset& train)
{
    StandardLengths sums;
    std::size_t count = 0;
    for (const auto& s : train.sequences)
        for (const auto& f : s.frames()) {
            for (const auto& e : train.skeleton.edges())
                sums[e] += distance(f.at(e.first), f.at(e.second));
            ++count;
        }
    if (count == 0)
        throw InputError("cannot compute standard limb lengths from an empty training set");
    for (auto& [e, v] : sums)
        v /= static_cast<double>(count);
    return sums;
}

FrameSequence pad_at_rest(const FrameSequence& seq, const Frame& pose)
{
    validate_frame(pose, seq.joint_count(), "at-rest pose");
    std::vector<Frame> frames;
    frames.reserve(seq.size() + 2);
    frames.push_back(pose);
    frames.insert(frames.end(), seq.frames().begin(), seq.frames().end());
    frames.push_back(pose);
    return seq.with_frames(std::move(frames));
}

Normalizer::Normalizer(NormalizationSpec spec, const Skeleton& skeleton, StandardLengths lengths,
                       std::optional<Frame> at_rest_pose)
    : spec_(std::move(spec)), skeleton_(&skeleton), lengths_(std::move(lengths))
{
    validate(spec_, skeleton, at_rest_pose.has_value());
    if (spec_.translate.mode != FrameMode::Off)
        anchor_ = skeleton.index_of(spec_.translate.anchor);
    if (spec_.rotate.mode != FrameMode::Off) {
        heading_ = {skeleton.index_of(spec_.rotate.heading.first),
                    skeleton.index_of(spec_.rotate.heading.second)};
        up_ = {skeleton.index_of(spec_.rotate.up.first), skeleton.index_of(spec_.rotate.up.second)};
    }
    if (spec_.limbs.enabled)
        root_ = skeleton.index_of(spec_.limbs.root);
    if (spec_.at_rest_pad) {
        const FrameSequence pose_seq("at-rest", std::nullopt, 1.0, {*at_rest_pose});
        pose_ = apply_rigid(pose_seq).frames().front();
    }
}

FrameSequence Normalizer::apply_rigid(const FrameSequence& seq) const
{
    FrameSequence out = translate(seq, anchor_, spec_.translate.mode);
    out = rotate(out, heading_, up_, spec_.rotate.mode);
    if (spec_.limbs.enabled)
        out = standardize_limbs(out, *skeleton_, lengths_, root_);
    return out;
}

FrameSequence Normalizer::apply(const FrameSequence& seq) const
{
    FrameSequence out = apply_rigid(seq);
    if (spec_.at_rest_pad)
        out = pad_at_rest(out, *pose_);
    return out;
}

} // namespace subskel
