#include "subskel/distances.hpp"

#include "subskel/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <vector>

namespace subskel {

std::string to_string(MeasureKind kind)
{
    switch (kind) {
    case MeasureKind::CF: return "cf";
    case MeasureKind::DF: return "df";
    case MeasureKind::DTW: return "dtw";
    }
    return "?";
}

MeasureKind parse_measure(const std::string& text)
{
    std::string t;
    for (char c : text)
        t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (t == "cf")
        return MeasureKind::CF;
    if (t == "df")
        return MeasureKind::DF;
    if (t == "dtw")
        return MeasureKind::DTW;
    throw ConfigError("unknown distance measure '" + text + "' (expected cf, df or dtw)");
}

namespace {

void check_pair(const Trajectory& p, const Trajectory& q)
{
    if (p.empty() || q.empty())
        throw InputError("distance of an empty trajectory is undefined");
    if (p.dim() != q.dim())
        throw InputError("trajectory dimension mismatch: " + std::to_string(p.dim()) + " vs " +
                         std::to_string(q.dim()));
}

inline double squared(const double* a, const double* b, std::size_t dim)
{
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

inline double dot_diff(const double* a, const double* b, const double* c, const double* d,
                       std::size_t dim)
{
    // (a - b) . (c - d)
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k)
        s += (a[k] - b[k]) * (c[k] - d[k]);
    return s;
}

enum class Accumulate { Max, Sum };

// Shared DP for DF and DTW. Rows run over the longer curve so the buffers are
// O(min(m, n)). Returns +inf once every entry of a row exceeds `cutoff`; entries
// never decrease along a coupling, so the final value would exceed it too.
template <Accumulate mode>
double coupling_dp(const Trajectory& p, const Trajectory& q, double cutoff)
{
    check_pair(p, q);
    const Trajectory& rows = p.size() >= q.size() ? p : q;
    const Trajectory& cols = p.size() >= q.size() ? q : p;
    const std::size_t m = rows.size();
    const std::size_t n = cols.size();
    const std::size_t dim = p.dim();
    const double* r = rows.coords().data();
    const double* c = cols.coords().data();

    auto combine = [](double cost, double best) {
        if constexpr (mode == Accumulate::Max)
            return std::max(cost, best);
        else
            return cost + best;
    };

    std::vector<double> prev(n), cur(n);
    {
        double row_min = kInfinity;
        for (std::size_t j = 0; j < n; ++j) {
            const double cost = std::sqrt(squared(r, c + j * dim, dim));
            prev[j] = j == 0 ? cost : combine(cost, prev[j - 1]);
            row_min = std::min(row_min, prev[j]);
        }
        if (row_min > cutoff)
            return kInfinity;
    }
    for (std::size_t i = 1; i < m; ++i) {
        const double* ri = r + i * dim;
        double row_min = kInfinity;
        cur[0] = combine(std::sqrt(squared(ri, c, dim)), prev[0]);
        row_min = cur[0];
        for (std::size_t j = 1; j < n; ++j) {
            const double cost = std::sqrt(squared(ri, c + j * dim, dim));
            cur[j] = combine(cost, std::min({prev[j], cur[j - 1], prev[j - 1]}));
            row_min = std::min(row_min, cur[j]);
        }
        if (row_min > cutoff)
            return kInfinity;
        std::swap(prev, cur);
    }
    return prev[n - 1];
}

struct Interval {
    double lo = 1.0;
    double hi = 0.0;
    bool empty() const { return lo > hi; }
};

// Eps-independent part of the parameters t in [0,1] with |d - t v| <= eps,
// where dd = |d|^2, dv = d.v, a = |v|^2.
struct Passage {
    double a = 0.0;
    double tc = 0.0;
    double perp2 = 0.0;

    Passage() = default;
    Passage(double dd, double dv, double len2) : a(len2)
    {
        if (a <= 0.0) {
            perp2 = dd;
            return;
        }
        tc = dv / a;
        perp2 = dd - tc * dv;
        if (perp2 < 0.0)
            perp2 = 0.0;
    }

    Interval at(double eps2) const
    {
        if (a <= 0.0)
            return perp2 <= eps2 ? Interval{0.0, 1.0} : Interval{};
        if (perp2 > eps2)
            return {};
        const double half = std::sqrt((eps2 - perp2) / a);
        return {std::max(0.0, tc - half), std::min(1.0, tc + half)};
    }
};

// Everything the free-space diagram needs, independent of eps.
class FreeSpace {
public:
    FreeSpace(const Trajectory& p, const Trajectory& q)
        : m_(p.size()), n_(q.size()), d2_(m_ * n_), len_q_(n_ > 0 ? n_ - 1 : 0), len_p_(m_ > 0 ? m_ - 1 : 0),
          vertical_(m_ * (n_ > 0 ? n_ - 1 : 0)), horizontal_((m_ > 0 ? m_ - 1 : 0) * n_)
    {
        const std::size_t dim = p.dim();
        const double* pc = p.coords().data();
        const double* qc = q.coords().data();
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                d2_[i * n_ + j] = squared(pc + i * dim, qc + j * dim, dim);
        for (std::size_t j = 0; j + 1 < n_; ++j)
            len_q_[j] = squared(qc + (j + 1) * dim, qc + j * dim, dim);
        for (std::size_t i = 0; i + 1 < m_; ++i)
            len_p_[i] = squared(pc + (i + 1) * dim, pc + i * dim, dim);
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t j = 0; j + 1 < n_; ++j)
                vertical_[i * (n_ - 1) + j] =
                    Passage(d2_[i * n_ + j], dot_diff(pc + i * dim, qc + j * dim, qc + (j + 1) * dim, qc + j * dim, dim),
                            len_q_[j]);
        for (std::size_t i = 0; i + 1 < m_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                horizontal_[i * n_ + j] =
                    Passage(d2_[i * n_ + j], dot_diff(qc + j * dim, pc + i * dim, pc + (i + 1) * dim, pc + i * dim, dim),
                            len_p_[i]);
    }

    double start_distance() const { return std::sqrt(d2_.front()); }
    double end_distance() const { return std::sqrt(d2_.back()); }
    double longest_edge() const
    {
        double m = 0.0;
        for (double v : len_q_)
            m = std::max(m, v);
        for (double v : len_p_)
            m = std::max(m, v);
        return std::sqrt(m);
    }

    bool decide(double eps) const
    {
        if (!(eps >= 0.0))
            return false;
        const double eps2 = eps * eps;
        if (d2_.front() > eps2 || d2_.back() > eps2)
            return false;
        if (m_ == 1 || n_ == 1) {
            // A point against a polyline: the farthest vertex decides.
            return std::all_of(d2_.begin(), d2_.end(), [&](double v) { return v <= eps2; });
        }
        const std::size_t cells_y = n_ - 1;

        // left[j]: reachable part of the vertical edge x = i over cell row j.
        std::vector<Interval> left(cells_y);
        bool open = true;
        for (std::size_t j = 0; j < cells_y; ++j) {
            const Interval f = vertical(0, j, eps2);
            if (open && !f.empty() && f.lo <= 0.0) {
                left[j] = f;
                open = f.hi >= 1.0;
            } else {
                left[j] = Interval{};
                open = false;
            }
        }

        bool bottom_open = true; // reachability along the x axis (y = 0)
        Interval top_last{};
        for (std::size_t i = 0; i + 1 < m_; ++i) {
            Interval bottom{};
            {
                const Interval f = horizontal(i, 0, eps2);
                if (bottom_open && !f.empty() && f.lo <= 0.0) {
                    bottom = f;
                    bottom_open = f.hi >= 1.0;
                } else {
                    bottom_open = false;
                }
            }
            bool any = !bottom.empty();
            for (std::size_t j = 0; j < cells_y; ++j) {
                const Interval& l = left[j];
                if (l.empty() && bottom.empty()) {
                    // Nothing enters this cell.
                    left[j] = Interval{};
                    continue;
                }
                const Interval fr = vertical(i + 1, j, eps2);
                const Interval ft = horizontal(i, j + 1, eps2);
                Interval right{}, top{};
                if (!fr.empty()) {
                    if (!bottom.empty())
                        right = fr;
                    else if (!l.empty())
                        right = {std::max(fr.lo, l.lo), fr.hi};
                }
                if (!ft.empty()) {
                    if (!l.empty())
                        top = ft;
                    else if (!bottom.empty())
                        top = {std::max(ft.lo, bottom.lo), ft.hi};
                }
                left[j] = right;
                bottom = top;
                any = any || !right.empty() || !top.empty();
            }
            if (!any)
                return false;
            top_last = bottom;
        }
        const Interval& right_last = left[cells_y - 1];
        return (!right_last.empty() && right_last.hi >= 1.0) ||
               (!top_last.empty() && top_last.hi >= 1.0);
    }

private:
    // Vertex p_i against segment q_j q_{j+1}.
    Interval vertical(std::size_t i, std::size_t j, double eps2) const
    {
        return vertical_[i * (n_ - 1) + j].at(eps2);
    }
    // Vertex q_j against segment p_i p_{i+1}.
    Interval horizontal(std::size_t i, std::size_t j, double eps2) const
    {
        return horizontal_[i * n_ + j].at(eps2);
    }

    std::size_t m_, n_;
    std::vector<double> d2_;
    std::vector<double> len_q_, len_p_;
    std::vector<Passage> vertical_, horizontal_;
};

double bisect_cf(const FreeSpace& fs, double lower, double upper, double tolerance)
{
    if (upper <= lower || fs.decide(lower))
        return lower;
    // CF <= DF always holds, so the upper end is taken as feasible even when the
    // decision at exactly DF rounds the other way.
    double lo = lower;
    // DF exceeds CF by at most the longest edge; start from there when that end
    // is confirmed infeasible.
    if (const double tight = upper - fs.longest_edge(); tight > lower && !fs.decide(tight))
        lo = tight;
    double hi = upper;
    for (int iter = 0; iter < 64 && (hi - lo) > tolerance * hi; ++iter) {
        const double mid = lo + (hi - lo) / 2.0;
        if (fs.decide(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

} // namespace

double vertex_distance(const Trajectory& p, std::size_t i, const Trajectory& q, std::size_t j)
{
    return std::sqrt(squared(p[i].data(), q[j].data(), p.dim()));
}

double discrete_frechet(const Trajectory& p, const Trajectory& q)
{
    return coupling_dp<Accumulate::Max>(p, q, kInfinity);
}

double dtw(const Trajectory& p, const Trajectory& q)
{
    return coupling_dp<Accumulate::Sum>(p, q, kInfinity);
}

namespace {

// Fixed orientation for the free-space diagram so that CF(p, q) and CF(q, p)
// are bit-identical.
FreeSpace oriented_free_space(const Trajectory& p, const Trajectory& q)
{
    const bool swap = p.size() != q.size() ? p.size() < q.size() : q.coords() < p.coords();
    return swap ? FreeSpace(q, p) : FreeSpace(p, q);
}

} // namespace

bool cf_decision(const Trajectory& p, const Trajectory& q, double eps)
{
    check_pair(p, q);
    return oriented_free_space(p, q).decide(eps);
}

double continuous_frechet(const Trajectory& p, const Trajectory& q, double tolerance)
{
    check_pair(p, q);
    const FreeSpace fs = oriented_free_space(p, q);
    const double lower = std::max(fs.start_distance(), fs.end_distance());
    return bisect_cf(fs, lower, discrete_frechet(p, q), tolerance);
}

double compute_distance(const DistanceMeasure& measure, const Trajectory& p, const Trajectory& q)
{
    switch (measure.kind) {
    case MeasureKind::CF: return continuous_frechet(p, q, measure.cf_tolerance);
    case MeasureKind::DF: return discrete_frechet(p, q);
    case MeasureKind::DTW: return dtw(p, q);
    }
    return kInfinity;
}

double compute_distance_bounded(const DistanceMeasure& measure, const Trajectory& p,
                                const Trajectory& q, double cutoff)
{
    if (cutoff == kInfinity)
        return compute_distance(measure, p, q);
    switch (measure.kind) {
    case MeasureKind::DF: return coupling_dp<Accumulate::Max>(p, q, cutoff);
    case MeasureKind::DTW: return coupling_dp<Accumulate::Sum>(p, q, cutoff);
    case MeasureKind::CF: {
        check_pair(p, q);
        const FreeSpace fs = oriented_free_space(p, q);
        const double lower = std::max(fs.start_distance(), fs.end_distance());
        if (lower > cutoff || !fs.decide(cutoff))
            return kInfinity;
        return bisect_cf(fs, lower, discrete_frechet(p, q), measure.cf_tolerance);
    }
    }
    return kInfinity;
}

} // namespace subskel
