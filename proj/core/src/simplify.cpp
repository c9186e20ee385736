#include "subskel/simplify.hpp"

#include "subskel/distances.hpp"
#include "subskel/error.hpp"

#include <algorithm>

namespace subskel {

namespace {

// Headroom so that the bisected continuous_frechet value of the result, which
// may overshoot the true distance by its relative tolerance, stays below epsilon.
constexpr double kDecisionHeadroom = 1.0 - 4e-6;

bool same_vertex(const Trajectory& p, std::size_t a, std::size_t b)
{
    const auto va = p[a];
    const auto vb = p[b];
    return std::equal(va.begin(), va.end(), vb.begin());
}

Trajectory take(const Trajectory& p, const std::vector<std::size_t>& keep)
{
    std::vector<double> coords;
    coords.reserve(keep.size() * p.dim());
    for (auto i : keep) {
        const auto v = p[i];
        coords.insert(coords.end(), v.begin(), v.end());
    }
    return Trajectory(p.dim(), std::move(coords));
}

} // namespace

Trajectory simplify(const Trajectory& p, const SimplifySpec& spec)
{
    if (p.empty())
        throw InputError("cannot simplify an empty trajectory");
    if (!(spec.epsilon >= 0.0))
        throw ConfigError("simplification epsilon must be non-negative");

    std::vector<std::size_t> keep{0};
    const std::size_t n = p.size();
    if (spec.epsilon == 0.0) {
        for (std::size_t i = 1; i < n; ++i)
            if (!same_vertex(p, i, keep.back()))
                keep.push_back(i);
        return take(p, keep);
    }

    const double eps = spec.epsilon * kDecisionHeadroom;
    auto fits = [&](std::size_t anchor, std::size_t j) {
        return cf_decision(p.slice(anchor, j), take(p, {anchor, j}), eps);
    };

    // Forward extension from each anchor: exponential probing for the first
    // failing offset, then bisection between the last fit and that failure.
    std::size_t anchor = 0;
    while (anchor + 1 < n) {
        std::size_t good = anchor + 1;
        std::size_t bad = n;
        for (std::size_t step = 2;; step *= 2) {
            const std::size_t j = std::min(anchor + step, n - 1);
            if (j <= good)
                break;
            if (!fits(anchor, j)) {
                bad = j;
                break;
            }
            good = j;
            if (j == n - 1)
                break;
        }
        while (bad - good > 1) {
            const std::size_t mid = good + (bad - good) / 2;
            if (fits(anchor, mid))
                good = mid;
            else
                bad = mid;
        }
        keep.push_back(good);
        anchor = good;
    }
    return take(p, keep);
}

} // namespace subskel
