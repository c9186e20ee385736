#include "subskel/features.hpp"

#include "subskel/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace subskel {

using nlohmann::json;

std::string to_string(ReferenceScope scope)
{
    switch (scope) {
    case ReferenceScope::All: return "all";
    case ReferenceScope::Central: return "central";
    case ReferenceScope::Auto: return "auto";
    }
    return "?";
}

ReferenceScope parse_reference_scope(const std::string& text)
{
    if (text == "all")
        return ReferenceScope::All;
    if (text == "central")
        return ReferenceScope::Central;
    if (text == "auto")
        return ReferenceScope::Auto;
    throw ConfigError("unknown reference scope '" + text + "' (expected all, central or auto)");
}

namespace {

std::vector<JointIndex> reference_joints(const Skeleton& g, ReferenceScope scope)
{
    if (scope == ReferenceScope::Auto)
        scope = g.size() <= 15 ? ReferenceScope::All : ReferenceScope::Central;
    std::vector<JointIndex> refs;
    if (scope == ReferenceScope::All) {
        refs.resize(g.size());
        std::iota(refs.begin(), refs.end(), JointIndex{0});
    } else {
        refs = g.central_joints();
        std::sort(refs.begin(), refs.end());
    }
    return refs;
}

// Junctions become singleton sets; joints of degree <= 2 are grouped by
// connectivity among themselves.
std::vector<std::vector<JointIndex>> merged_sets(const Skeleton& g)
{
    const std::size_t n = g.size();
    std::vector<JointIndex> parent(n);
    std::iota(parent.begin(), parent.end(), JointIndex{0});
    auto find = [&](JointIndex x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [a, b] : g.edges())
        if (g.degree(a) <= 2 && g.degree(b) <= 2)
            parent[find(a)] = find(b);
    std::map<JointIndex, std::vector<JointIndex>> by_root;
    for (JointIndex j = 0; j < n; ++j)
        by_root[find(j)].push_back(j);
    std::vector<std::vector<JointIndex>> sets;
    for (auto& [root, members] : by_root)
        sets.push_back(std::move(members));
    std::sort(sets.begin(), sets.end(), [](const auto& x, const auto& y) { return x.front() < y.front(); });
    return sets;
}

std::string set_name(const Skeleton& g, const std::vector<JointIndex>& members)
{
    if (members.size() == 1)
        return g.name(members.front());
    return g.name(members.front()) + ".." + g.name(members.back());
}

void insert_sorted_unique(std::vector<Singleton>& v, const Singleton& s)
{
    const auto it = std::lower_bound(v.begin(), v.end(), s);
    if (it == v.end() || *it != s)
        v.insert(it, s);
}

} // namespace

std::vector<CanonicalSubSkeleton> canonical_subskeletons(const Skeleton& skeleton, bool merge,
                                                         ReferenceScope scope)
{
    std::vector<std::vector<JointIndex>> bases;
    if (merge) {
        bases = merged_sets(skeleton);
    } else {
        for (JointIndex j = 0; j < skeleton.size(); ++j)
            bases.push_back({j});
    }
    const auto refs = reference_joints(skeleton, scope);

    std::vector<CanonicalSubSkeleton> out;
    for (const auto& members : bases) {
        CanonicalSubSkeleton c{set_name(skeleton, members), std::nullopt, {}};
        for (JointIndex j : members)
            c.singletons.push_back({j, std::nullopt});
        out.push_back(std::move(c));
    }
    for (const auto& members : bases)
        for (JointIndex r : refs) {
            CanonicalSubSkeleton c{set_name(skeleton, members) + "(" + skeleton.name(r) + ")", r, {}};
            for (JointIndex j : members)
                if (j != r)
                    c.singletons.push_back({j, r});
            if (!c.singletons.empty())
                out.push_back(std::move(c));
        }
    return out;
}

std::string FeatureGroup::key() const
{
    std::string out = reference ? "rel" + std::to_string(*reference) + ":" : std::string("abs:");
    for (std::size_t i = 0; i < singletons.size(); ++i)
        out += (i ? "," : "") + std::to_string(singletons[i].joint);
    return out;
}

bool FeatureTemplate::contains(const CanonicalSubSkeleton& c) const
{
    return std::find(chosen_.begin(), chosen_.end(), c) != chosen_.end();
}

std::string FeatureTemplate::describe() const
{
    std::string out = "{";
    for (std::size_t i = 0; i < chosen_.size(); ++i)
        out += (i ? ", " : "") + chosen_[i].name;
    return out + "}";
}

FeatureTemplate adapted_union(const FeatureTemplate& t, const CanonicalSubSkeleton& c)
{
    if (t.contains(c))
        throw ConfigError("canonical set '" + c.name + "' is already in the template");
    FeatureTemplate out = t;
    out.chosen_.push_back(c);
    auto group = std::find_if(out.groups_.begin(), out.groups_.end(),
                              [&](const FeatureGroup& g) { return g.reference == c.reference; });
    if (group == out.groups_.end()) {
        out.groups_.push_back({c.reference, {}});
        group = out.groups_.end() - 1;
    }
    for (const auto& s : c.singletons)
        insert_sorted_unique(group->singletons, s);
    return out;
}

FeatureTemplate make_template(const std::vector<CanonicalSubSkeleton>& sets)
{
    FeatureTemplate t;
    for (const auto& c : sets)
        t = adapted_union(t, c);
    return t;
}

std::vector<FeatureTrajectory> extract_feature_trajectories(const FrameSequence& seq,
                                                            const FeatureTemplate& t)
{
    if (t.empty())
        throw ConfigError("cannot extract features for an empty template");
    std::vector<FeatureTrajectory> out;
    out.reserve(t.groups().size());
    for (const auto& g : t.groups()) {
        std::vector<double> coords;
        coords.reserve(seq.size() * g.dim());
        for (const auto& f : seq.frames())
            for (const auto& s : g.singletons) {
                const Vec3 v = s.reference ? f.at(s.joint) - f.at(*s.reference) : f.at(s.joint);
                coords.insert(coords.end(), {v.x, v.y, v.z});
            }
        out.push_back({g.key(), Trajectory(g.dim(), std::move(coords))});
    }
    return out;
}

Trajectory concat_features(const std::vector<FeatureTrajectory>& fts)
{
    if (fts.empty())
        throw InputError("cannot concatenate an empty feature list");
    const std::size_t n = fts.front().trajectory.size();
    std::size_t dim = 0;
    for (const auto& f : fts) {
        if (f.trajectory.size() != n)
            throw InputError("feature trajectories differ in length (" + std::to_string(n) + " vs " +
                             std::to_string(f.trajectory.size()) + ")");
        dim += f.trajectory.dim();
    }
    std::vector<double> coords;
    coords.reserve(n * dim);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& f : fts) {
            const auto v = f.trajectory[i];
            coords.insert(coords.end(), v.begin(), v.end());
        }
    return Trajectory(dim, std::move(coords));
}

namespace {

json singleton_json(const Singleton& s, const Skeleton& g)
{
    return {{"joint", g.name(s.joint)}, {"reference", s.reference ? json(g.name(*s.reference)) : json(nullptr)}};
}

Singleton singleton_from(const json& j, const Skeleton& g)
{
    Singleton s{g.index_of(j.at("joint").get<std::string>()), std::nullopt};
    if (j.contains("reference") && !j.at("reference").is_null())
        s.reference = g.index_of(j.at("reference").get<std::string>());
    if (s.reference == s.joint)
        throw InputError("singleton '" + g.name(s.joint) + "' references itself");
    return s;
}

} // namespace

json to_json(const CanonicalSubSkeleton& c, const Skeleton& skeleton)
{
    json singles = json::array();
    for (const auto& s : c.singletons)
        singles.push_back(singleton_json(s, skeleton));
    return {{"name", c.name},
            {"reference", c.reference ? json(skeleton.name(*c.reference)) : json(nullptr)},
            {"singletons", singles}};
}

CanonicalSubSkeleton canonical_from_json(const json& j, const Skeleton& skeleton)
{
    try {
        CanonicalSubSkeleton c;
        c.name = j.at("name").get<std::string>();
        if (!j.at("reference").is_null())
            c.reference = skeleton.index_of(j.at("reference").get<std::string>());
        for (const auto& s : j.at("singletons")) {
            const auto single = singleton_from(s, skeleton);
            if (single.reference != c.reference)
                throw InputError("canonical set '" + c.name + "' mixes references");
            c.singletons.push_back(single);
        }
        std::sort(c.singletons.begin(), c.singletons.end());
        if (c.singletons.empty())
            throw InputError("canonical set '" + c.name + "' is empty");
        return c;
    } catch (const json::exception& e) {
        throw InputError(std::string("canonical set: ") + e.what());
    }
}

json to_json(const FeatureTemplate& t, const Skeleton& skeleton)
{
    json chosen = json::array();
    for (const auto& c : t.chosen())
        chosen.push_back(to_json(c, skeleton));
    json groups = json::array();
    for (const auto& g : t.groups()) {
        json singles = json::array();
        for (const auto& s : g.singletons)
            singles.push_back(singleton_json(s, skeleton));
        groups.push_back({{"reference", g.reference ? json(skeleton.name(*g.reference)) : json(nullptr)},
                          {"singletons", singles}});
    }
    return {{"chosen", chosen}, {"groups", groups}};
}

FeatureTemplate template_from_json(const json& j, const Skeleton& skeleton)
{
    std::vector<CanonicalSubSkeleton> sets;
    try {
        for (const auto& c : j.at("chosen"))
            sets.push_back(canonical_from_json(c, skeleton));
    } catch (const json::exception& e) {
        throw InputError(std::string("feature template: ") + e.what());
    }
    FeatureTemplate t = make_template(sets);
    // The group layout is derived; a stored layout must agree with it.
    if (j.contains("groups") && to_json(t, skeleton).at("groups") != j.at("groups"))
        throw InputError("feature template group layout does not match its chosen sets");
    return t;
}

} // namespace subskel
