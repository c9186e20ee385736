#pragma once

#include "subskel/distances.hpp"
#include "subskel/model.hpp"

#include <cstdint>
#include <vector>

namespace subskel {

struct Neighbor {
    std::size_t id = 0;
    double distance = 0.0;

    bool operator==(const Neighbor&) const = default;
};

struct QueryStats {
    std::size_t distance_computations = 0;
};

/// Exact k nearest entries by scanning all of them. Results ascend by
/// (distance, id). Throws ConfigError when k is 0 or exceeds the corpus.
std::vector<Neighbor> linear_knn(const std::vector<Trajectory>& entries, const DistanceMeasure& measure,
                                 const Trajectory& query, std::size_t k, QueryStats* stats = nullptr);

/// Pivot-table index for metric measures. Pivots are chosen by greedy
/// farthest-point selection from a seeded start; ids are entry positions.
class MetricIndex {
public:
    /// num_pivots == 0 selects ceil(sqrt(n)). Larger values are clamped to n.
    MetricIndex(std::vector<Trajectory> entries, DistanceMeasure measure, std::size_t num_pivots = 0,
                std::uint64_t seed = 0, std::size_t threads = 1);

    /// Same contract as linear_knn.
    std::vector<Neighbor> knn(const Trajectory& query, std::size_t k, QueryStats* stats = nullptr) const;

    std::size_t size() const { return entries_.size(); }
    const std::vector<Trajectory>& entries() const { return entries_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }
    /// Distance from entry e to the p-th pivot.
    double pivot_distance(std::size_t e, std::size_t p) const { return table_[e * pivots_.size() + p]; }
    const DistanceMeasure& measure() const { return measure_; }

private:
    std::vector<Trajectory> entries_;
    DistanceMeasure measure_;
    std::vector<std::size_t> pivots_;
    std::vector<double> table_;
};

} // namespace subskel
