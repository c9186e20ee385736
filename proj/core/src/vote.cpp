#include "subskel/vote.hpp"

#include "subskel/error.hpp"

#include <algorithm>
#include <limits>

namespace subskel {

Vote knn_weighted_vote(const std::vector<LabeledDistance>& neighbors, std::optional<double> dbar)
{
    if (neighbors.empty())
        throw InputError("weighted vote needs at least one neighbor");
    double smallest = std::numeric_limits<double>::infinity();
    for (const auto& n : neighbors) {
        if (!(n.distance >= 0.0))
            throw InputError("neighbor distances must be non-negative");
        smallest = std::min(smallest, n.distance);
    }
    const double scale = dbar.value_or(smallest);

    Vote v;
    v.dbar = scale;
    std::map<std::string, double> closest;
    for (const auto& n : neighbors) {
        auto [it, fresh] = closest.emplace(n.label, n.distance);
        if (!fresh)
            it->second = std::min(it->second, n.distance);
        if (scale == 0.0) {
            if (n.distance == 0.0)
                v.weights[n.label] += 1.0;
            else
                v.weights.emplace(n.label, 0.0);
        } else {
            v.weights[n.label] += scale / n.distance;
        }
    }
    // Map iteration is lexicographic, so strict comparisons keep the smaller label.
    const std::string* best = nullptr;
    for (const auto& [label, w] : v.weights) {
        if (!best) {
            best = &label;
            continue;
        }
        const double bw = v.weights.at(*best);
        if (w > bw || (w == bw && closest.at(label) < closest.at(*best)))
            best = &label;
    }
    v.label = *best;
    return v;
}

std::string majority_vote(const std::vector<Vote>& votes)
{
    if (votes.empty())
        throw InputError("majority vote needs at least one feature vote");
    std::map<std::string, std::size_t> counts;
    for (const auto& v : votes)
        ++counts[v.label];
    std::size_t top = 0;
    for (const auto& [label, c] : counts)
        top = std::max(top, c);

    const std::string* best = nullptr;
    double best_weight = -1.0;
    for (const auto& [label, c] : counts) {
        if (c != top)
            continue;
        double total = 0.0;
        for (const auto& v : votes)
            if (auto it = v.weights.find(label); it != v.weights.end())
                total += it->second;
        if (total > best_weight) {
            best_weight = total;
            best = &label;
        }
    }
    return *best;
}

} // namespace subskel
