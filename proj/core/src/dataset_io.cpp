#include "subskel/dataset_io.hpp"

#include "subskel/error.hpp"

#include <fstream>
#include <sstream>

namespace subskel {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key, const char* context)
{
    if (!j.is_object() || !j.contains(key))
        throw InputError(std::string(context) + ": missing field '" + key + "'");
    return j.at(key);
}

Vec3 point_from_json(const json& p)
{
    if (!p.is_array() || p.size() != 3)
        throw InputError("joint position must be an [x, y, z] array");
    for (const auto& c : p)
        if (!c.is_number())
            throw InputError("joint coordinate is not a number");
    return {p[0].get<double>(), p[1].get<double>(), p[2].get<double>()};
}

std::ifstream open_in(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open '" + path.string() + "'");
    return in;
}

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot write '" + path.string() + "'");
    return out;
}

} // namespace

json frame_to_json(const Frame& frame)
{
    json out = json::array();
    for (const auto& p : frame)
        out.push_back({p.x, p.y, p.z});
    return out;
}

Frame frame_from_json(const json& j)
{
    if (!j.is_array())
        throw InputError("frame must be an array of joint positions");
    Frame f;
    f.reserve(j.size());
    for (const auto& p : j)
        f.push_back(point_from_json(p));
    return f;
}

json skeleton_to_json(const Skeleton& skeleton, const std::optional<Frame>& at_rest_pose)
{
    json edges = json::array();
    for (const auto& [a, b] : skeleton.edges())
        edges.push_back({skeleton.name(a), skeleton.name(b)});
    json central = json::array();
    for (auto c : skeleton.central_joints())
        central.push_back(skeleton.name(c));
    json out = {{"joints", skeleton.joints()}, {"edges", edges}, {"central_joints", central}};
    if (at_rest_pose)
        out["at_rest_pose"] = frame_to_json(*at_rest_pose);
    return out;
}

SkeletonFile skeleton_from_json(const json& j)
{
    try {
        auto joints = require(j, "joints", "skeleton").get<std::vector<std::string>>();
        std::vector<std::pair<std::string, std::string>> edges;
        for (const auto& e : require(j, "edges", "skeleton")) {
            if (!e.is_array() || e.size() != 2)
                throw InputError("skeleton edge must be a pair of joint ids");
            edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
        }
        std::vector<std::string> central;
        if (j.contains("central_joints"))
            central = j.at("central_joints").get<std::vector<std::string>>();
        SkeletonFile out{Skeleton(std::move(joints), edges, central), std::nullopt};
        if (j.contains("at_rest_pose") && !j.at("at_rest_pose").is_null()) {
            Frame pose = frame_from_json(j.at("at_rest_pose"));
            validate_frame(pose, out.skeleton.size(), "at-rest pose");
            out.at_rest_pose = std::move(pose);
        }
        return out;
    } catch (const json::exception& e) {
        throw InputError(std::string("skeleton: ") + e.what());
    }
}

json sequence_to_json(const FrameSequence& seq)
{
    json frames = json::array();
    for (const auto& f : seq.frames())
        frames.push_back(frame_to_json(f));
    return {{"label", seq.label()},
            {"subject", seq.subject() ? json(*seq.subject()) : json(nullptr)},
            {"fps", seq.fps()},
            {"frames", std::move(frames)}};
}

FrameSequence sequence_from_json(const json& j)
{
    try {
        auto label = require(j, "label", "sequence").get<std::string>();
        std::optional<std::string> subject;
        if (j.contains("subject") && !j.at("subject").is_null())
            subject = j.at("subject").get<std::string>();
        const double fps = require(j, "fps", "sequence").get<double>();
        std::vector<Frame> frames;
        for (const auto& f : require(j, "frames", "sequence"))
            frames.push_back(frame_from_json(f));
        return FrameSequence(std::move(label), std::move(subject), fps, std::move(frames));
    } catch (const json::exception& e) {
        throw InputError(std::string("sequence: ") + e.what());
    }
}

SkeletonFile read_skeleton_file(const std::filesystem::path& path)
{
    auto in = open_in(path);
    try {
        return skeleton_from_json(json::parse(in));
    } catch (const json::parse_error& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

void write_skeleton_file(const std::filesystem::path& path, const Skeleton& skeleton,
                         const std::optional<Frame>& at_rest_pose)
{
    auto out = open_out(path);
    out << skeleton_to_json(skeleton, at_rest_pose).dump(2) << '\n';
}

std::vector<FrameSequence> read_sequences(std::istream& in)
{
    std::vector<FrameSequence> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        try {
            out.push_back(sequence_from_json(json::parse(line)));
        } catch (const json::parse_error& e) {
            throw InputError("line " + std::to_string(line_no) + ": " + e.what());
        } catch (const InputError& e) {
            throw InputError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::vector<FrameSequence> read_sequences_file(const std::filesystem::path& path)
{
    auto in = open_in(path);
    try {
        return read_sequences(in);
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

void write_sequences(std::ostream& out, const std::vector<FrameSequence>& sequences)
{
    for (const auto& s : sequences)
        out << sequence_to_json(s).dump() << '\n';
}

void write_sequences_file(const std::filesystem::path& path,
                          const std::vector<FrameSequence>& sequences)
{
    auto out = open_out(path);
    write_sequences(out, sequences);
}

LabeledDataset load_dataset(const std::filesystem::path& jsonl, const std::filesystem::path& skeleton)
{
    auto sk = read_skeleton_file(skeleton);
    LabeledDataset ds{std::move(sk.skeleton), read_sequences_file(jsonl), std::move(sk.at_rest_pose)};
    ds.validate();
    return ds;
}

void save_dataset(const LabeledDataset& dataset, const std::filesystem::path& jsonl,
                  const std::filesystem::path& skeleton)
{
    write_skeleton_file(skeleton, dataset.skeleton, dataset.at_rest_pose);
    write_sequences_file(jsonl, dataset.sequences);
}

Trajectory trajectory_from_json(const json& j)
{
    try {
        if (!j.is_array() || j.empty())
            throw InputError("trajectory must be a non-empty array of points");
        return Trajectory::from_points(j.get<std::vector<std::vector<double>>>());
    } catch (const json::exception& e) {
        throw InputError(std::string("trajectory: ") + e.what());
    }
}

json trajectory_to_json(const Trajectory& t)
{
    json out = json::array();
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto v = t[i];
        out.push_back(std::vector<double>(v.begin(), v.end()));
    }
    return out;
}

} // namespace subskel
