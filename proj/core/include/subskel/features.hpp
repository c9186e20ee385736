#pragma once

#include "subskel/model.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace subskel {

/// One joint, either absolute or relative to a reference joint.
struct Singleton {
    JointIndex joint = 0;
    std::optional<JointIndex> reference;

    auto operator<=>(const Singleton&) const = default;
};

/// A set of singletons sharing one reference (or all absolute).
struct CanonicalSubSkeleton {
    std::string name;
    std::optional<JointIndex> reference;
    std::vector<Singleton> singletons; // sorted

    bool operator==(const CanonicalSubSkeleton&) const = default;
};

enum class ReferenceScope {
    All,
    Central,
    /// All joints for skeletons of at most 15 joints, else central joints.
    Auto,
};

std::string to_string(ReferenceScope scope);
ReferenceScope parse_reference_scope(const std::string& text);

/// Enumerates the candidate feature basis.
///
/// Without merging, every joint is an absolute set and every (joint, ref) pair
/// with ref in scope and ref != joint is a relative set. With merging, each
/// junction (degree >= 3) is a singleton set and each maximal chain of joints
/// of degree <= 2 is one set; relative variants exist per central joint with
/// the reference removed from the set (dropped if that leaves it empty).
///
/// Order: all absolute sets by smallest member, then relative sets grouped by
/// base set, references ascending.
std::vector<CanonicalSubSkeleton> canonical_subskeletons(const Skeleton& skeleton, bool merge,
                                                         ReferenceScope scope = ReferenceScope::Auto);

struct FeatureGroup {
    std::optional<JointIndex> reference;
    std::vector<Singleton> singletons; // sorted by (joint, reference), unique

    std::size_t dim() const { return 3 * singletons.size(); }
    /// Stable identity string, e.g. "abs:2,5" or "rel3:4,6".
    std::string key() const;
    bool operator==(const FeatureGroup&) const = default;
};

class FeatureTemplate {
public:
    const std::vector<CanonicalSubSkeleton>& chosen() const { return chosen_; }
    /// Groups in creation order.
    const std::vector<FeatureGroup>& groups() const { return groups_; }
    std::size_t feature_count() const { return groups_.size(); }
    bool empty() const { return chosen_.empty(); }
    bool contains(const CanonicalSubSkeleton& c) const;

    /// Human-readable listing of the chosen set names.
    std::string describe() const;

    bool operator==(const FeatureTemplate&) const = default;

    friend FeatureTemplate adapted_union(const FeatureTemplate& t, const CanonicalSubSkeleton& c);

private:
    std::vector<CanonicalSubSkeleton> chosen_;
    std::vector<FeatureGroup> groups_;
};

/// Adds `c` to the group with the same reference, creating a new group when
/// none matches. Throws ConfigError when c is already chosen.
FeatureTemplate adapted_union(const FeatureTemplate& t, const CanonicalSubSkeleton& c);

FeatureTemplate make_template(const std::vector<CanonicalSubSkeleton>& sets);

struct FeatureTrajectory {
    std::string feature;
    Trajectory trajectory;
};

/// One trajectory per group; each vertex holds the group's singletons in order,
/// 3 coordinates each (relative singletons as joint minus reference).
std::vector<FeatureTrajectory> extract_feature_trajectories(const FrameSequence& seq,
                                                            const FeatureTemplate& t);

/// Frame-wise concatenation in list order. Throws InputError on length mismatch.
Trajectory concat_features(const std::vector<FeatureTrajectory>& fts);

nlohmann::json to_json(const CanonicalSubSkeleton& c, const Skeleton& skeleton);
CanonicalSubSkeleton canonical_from_json(const nlohmann::json& j, const Skeleton& skeleton);

/// Stores chosen sets in selection order plus the derived group layout.
nlohmann::json to_json(const FeatureTemplate& t, const Skeleton& skeleton);
FeatureTemplate template_from_json(const nlohmann::json& j, const Skeleton& skeleton);

} // namespace subskel
