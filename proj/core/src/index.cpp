#include "subskel/index.hpp"

#include "subskel/error.hpp"
#include "subskel/parallel.hpp"
#include "subskel/random.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>

namespace subskel {

namespace {

bool before(const Neighbor& a, const Neighbor& b)
{
    return a.distance != b.distance ? a.distance < b.distance : a.id < b.id;
}

void check_k(std::size_t k, std::size_t n)
{
    if (k == 0)
        throw ConfigError("k must be at least 1");
    if (k > n)
        throw ConfigError("k = " + std::to_string(k) + " exceeds the " + std::to_string(n) +
                          " available training trajectories");
}

// Keeps the k best neighbors sorted by (distance, id).
class TopK {
public:
    explicit TopK(std::size_t k) : k_(k) {}

    double bound() const { return best_.size() < k_ ? kInfinity : best_.back().distance; }

    void offer(Neighbor n)
    {
        if (best_.size() == k_ && !before(n, best_.back()))
            return;
        best_.insert(std::upper_bound(best_.begin(), best_.end(), n, before), n);
        if (best_.size() > k_)
            best_.pop_back();
    }

    std::vector<Neighbor> take() { return std::move(best_); }

private:
    std::size_t k_;
    std::vector<Neighbor> best_;
};

} // namespace

std::vector<Neighbor> linear_knn(const std::vector<Trajectory>& entries, const DistanceMeasure& measure,
                                 const Trajectory& query, std::size_t k, QueryStats* stats)
{
    check_k(k, entries.size());
    TopK top(k);
    for (std::size_t i = 0; i < entries.size(); ++i)
        top.offer({i, compute_distance(measure, query, entries[i])});
    if (stats)
        stats->distance_computations += entries.size();
    return top.take();
}

MetricIndex::MetricIndex(std::vector<Trajectory> entries, DistanceMeasure measure, std::size_t num_pivots,
                         std::uint64_t seed, std::size_t threads)
    : entries_(std::move(entries)), measure_(measure)
{
    if (!is_metric(measure_.kind))
        throw ConfigError("metric index requires CF or DF, not " + to_string(measure_.kind));
    const std::size_t n = entries_.size();
    if (n == 0)
        throw InputError("cannot index an empty corpus");
    std::size_t count = num_pivots == 0 ? static_cast<std::size_t>(std::ceil(std::sqrt(double(n)))) : num_pivots;
    if (count > n) {
        spdlog::warn("requested {} pivots for {} entries; using {}", count, n, n);
        count = n;
    }

    table_.assign(n * count, 0.0);
    std::vector<double> nearest(n, kInfinity);
    std::vector<bool> chosen(n, false);
    Rng rng(seed);
    for (std::size_t p = 0; p < count; ++p) {
        std::size_t pivot = 0;
        if (p == 0) {
            pivot = rng.index(n);
        } else {
            double far = -1.0;
            for (std::size_t e = 0; e < n; ++e)
                if (!chosen[e] && nearest[e] > far) {
                    far = nearest[e];
                    pivot = e;
                }
        }
        chosen[pivot] = true;
        pivots_.push_back(pivot);
        parallel_for(n, threads, [&](std::size_t e) {
            const double d = e == pivot ? 0.0 : compute_distance(measure_, entries_[e], entries_[pivot]);
            table_[e * count + p] = d;
            nearest[e] = std::min(nearest[e], d);
        });
    }
}

std::vector<Neighbor> MetricIndex::knn(const Trajectory& query, std::size_t k, QueryStats* stats) const
{
    check_k(k, entries_.size());
    const std::size_t np = pivots_.size();
    TopK top(k);
    std::vector<double> to_pivot(np);
    std::vector<bool> done(entries_.size(), false);
    for (std::size_t p = 0; p < np; ++p) {
        to_pivot[p] = compute_distance(measure_, query, entries_[pivots_[p]]);
        top.offer({pivots_[p], to_pivot[p]});
        done[pivots_[p]] = true;
    }
    std::size_t computed = np;

    // CF values carry a relative error up to the bisection tolerance, so the
    // triangle-inequality bound is slackened accordingly.
    const double rel_slack = (measure_.kind == MeasureKind::CF ? 2.0 * measure_.cf_tolerance : 0.0) + 1e-12;
    std::vector<Neighbor> order;
    order.reserve(entries_.size() - np);
    for (std::size_t e = 0; e < entries_.size(); ++e) {
        if (done[e])
            continue;
        double lb = 0.0;
        for (std::size_t p = 0; p < np; ++p) {
            const double de = pivot_distance(e, p);
            lb = std::max(lb, std::abs(to_pivot[p] - de) - rel_slack * (to_pivot[p] + de));
        }
        order.push_back({e, lb});
    }
    std::sort(order.begin(), order.end(), before);
    for (const auto& [e, lb] : order) {
        const double bound = top.bound();
        if (lb > bound)
            break;
        // Abandoned computations (beyond the bound) are not counted.
        const double d = compute_distance_bounded(measure_, query, entries_[e], bound);
        if (d != kInfinity) {
            ++computed;
            top.offer({e, d});
        }
    }
    if (stats)
        stats->distance_computations += computed;
    return top.take();
}

} // namespace subskel
