#pragma once

// Test-only reference implementations. These deliberately share no code with
// the library paths they check.

#include "subskel/model.hpp"
#include "subskel/random.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <vector>

namespace subskel::oracle {

inline double euclid(const Trajectory& p, std::size_t i, const Trajectory& q, std::size_t j)
{
    double s = 0.0;
    for (std::size_t k = 0; k < p.dim(); ++k) {
        const double d = p[i][k] - q[j][k];
        s += d * d;
    }
    return std::sqrt(s);
}

/// Enumerates every monotone coupling path from (0,0) to (m-1,n-1) without
/// memoization and reduces each path with `fold`, keeping the minimum.
inline double brute_force_coupling(const Trajectory& p, const Trajectory& q, bool sum)
{
    const std::size_t m = p.size(), n = q.size();
    double best = std::numeric_limits<double>::infinity();
    std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t i, std::size_t j,
                                                                      double acc) {
        const double c = euclid(p, i, q, j);
        const double next = sum ? acc + c : std::max(acc, c);
        if (i == m - 1 && j == n - 1) {
            best = std::min(best, next);
            return;
        }
        if (i + 1 < m)
            walk(i + 1, j, next);
        if (j + 1 < n)
            walk(i, j + 1, next);
        if (i + 1 < m && j + 1 < n)
            walk(i + 1, j + 1, next);
    };
    walk(0, 0, 0.0);
    return best;
}

inline double brute_force_df(const Trajectory& p, const Trajectory& q)
{
    return brute_force_coupling(p, q, false);
}

inline double brute_force_dtw(const Trajectory& p, const Trajectory& q)
{
    return brute_force_coupling(p, q, true);
}

inline Trajectory random_trajectory(Rng& rng, std::size_t n, std::size_t dim, double scale = 1.0)
{
    std::vector<double> c(n * dim);
    for (auto& v : c)
        v = rng.uniform(-scale, scale);
    return Trajectory(dim, std::move(c));
}

/// Random walk, smoother than i.i.d. vertices.
inline Trajectory random_walk(Rng& rng, std::size_t n, std::size_t dim, double step = 1.0)
{
    std::vector<double> c(n * dim);
    for (std::size_t k = 0; k < dim; ++k)
        c[k] = rng.uniform(-1, 1);
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t k = 0; k < dim; ++k)
            c[i * dim + k] = c[(i - 1) * dim + k] + rng.uniform(-step, step);
    return Trajectory(dim, std::move(c));
}

inline double diameter(const Trajectory& t)
{
    double d = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = i + 1; j < t.size(); ++j)
            d = std::max(d, euclid(t, i, t, j));
    return d;
}

/// Point on the polyline at arc-length fraction s in [0, 1].
inline std::vector<double> point_at_arclength(const Trajectory& t, double s)
{
    std::vector<double> cum(t.size(), 0.0);
    for (std::size_t i = 1; i < t.size(); ++i)
        cum[i] = cum[i - 1] + euclid(t, i - 1, t, i);
    const double target = s * cum.back();
    std::size_t seg = 0;
    while (seg + 2 < t.size() && cum[seg + 1] < target)
        ++seg;
    const double len = cum[seg + 1] - cum[seg];
    const double u = len > 0 ? std::clamp((target - cum[seg]) / len, 0.0, 1.0) : 0.0;
    std::vector<double> out(t.dim());
    for (std::size_t k = 0; k < t.dim(); ++k)
        out[k] = t[seg][k] + u * (t[seg + 1][k] - t[seg][k]);
    return out;
}

/// Degree-2 chain count by union-find over edges whose endpoints both have
/// degree <= 2, plus one set per joint of degree >= 3.
inline std::size_t chain_set_count(const Skeleton& g)
{
    std::vector<std::size_t> parent(g.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> root = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = root(parent[x]);
    };
    for (const auto& [a, b] : g.edges())
        if (g.degree(a) <= 2 && g.degree(b) <= 2)
            parent[root(a)] = root(b);
    std::set<std::size_t> roots;
    for (std::size_t j = 0; j < g.size(); ++j)
        roots.insert(root(j));
    return roots.size();
}

/// Chain sets found by walking: every joint of degree >= 3 alone, and every
/// maximal path of joints of degree <= 2, traced from one of its members in
/// both directions. Each set is sorted; sets are ordered by smallest member.
inline std::vector<std::vector<JointIndex>> walked_chain_sets(const Skeleton& g)
{
    std::vector<bool> seen(g.size(), false);
    std::vector<std::vector<JointIndex>> sets;
    for (JointIndex j = 0; j < g.size(); ++j) {
        if (seen[j])
            continue;
        seen[j] = true;
        std::vector<JointIndex> chain{j};
        if (g.degree(j) <= 2) {
            for (JointIndex first : g.neighbors(j)) {
                JointIndex prev = j, cur = first;
                while (!seen[cur] && g.degree(cur) <= 2) {
                    seen[cur] = true;
                    chain.push_back(cur);
                    JointIndex next = cur;
                    for (JointIndex nb : g.neighbors(cur))
                        if (nb != prev)
                            next = nb;
                    if (next == cur)
                        break;
                    prev = cur;
                    cur = next;
                }
            }
        }
        std::sort(chain.begin(), chain.end());
        sets.push_back(chain);
    }
    std::sort(sets.begin(), sets.end());
    return sets;
}

} // namespace subskel::oracle
