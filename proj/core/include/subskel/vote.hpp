#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace subskel {

struct LabeledDistance {
    std::string label;
    double distance = 0.0;
};

struct Vote {
    std::string label;
    std::map<std::string, double> weights;
    /// Smallest distance among the voters (the weight scale).
    double dbar = 0.0;
};

/// Weighted k-NN vote. With d = min distance, each label gets the sum of
/// d / d_i over its neighbors; when d == 0 only zero-distance neighbors vote,
/// with weight 1 each. Ties go to the smallest single distance, then to the
/// lexicographically smaller label.
///
/// `dbar` overrides the weight scale (used for a scale shared across several
/// features); it must not exceed the smallest distance in the list.
/// Throws InputError on an empty list or a negative distance.
Vote knn_weighted_vote(const std::vector<LabeledDistance>& neighbors, std::optional<double> dbar = {});

/// Majority vote over per-feature predictions. Ties go to the label with the
/// larger weight summed over all features, then to the smaller label.
std::string majority_vote(const std::vector<Vote>& votes);

} // namespace subskel
