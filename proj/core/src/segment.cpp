#include "subskel/segment.hpp"

#include "subskel/error.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace subskel {

void validate(const SegmentationSpec& spec)
{
    if (spec.smoothing_window == 0 || spec.smoothing_window % 2 == 0)
        throw ConfigError("smoothing window must be an odd positive integer");
    if (!(spec.search_window_fraction > 0.0 && spec.search_window_fraction <= 1.0))
        throw ConfigError("search window fraction must be in (0, 1]");
}

std::vector<double> to_signal(const FrameSequence& seq)
{
    const Frame& first = seq.frames().front();
    std::vector<double> out;
    out.reserve(seq.size());
    for (const auto& f : seq.frames()) {
        double s = 0.0;
        for (std::size_t j = 0; j < f.size(); ++j) {
            const Vec3 d = f[j] - first[j];
            s += dot(d, d);
        }
        out.push_back(std::sqrt(s));
    }
    return out;
}

std::vector<double> smooth(const std::vector<double>& signal, std::size_t window)
{
    const std::size_t n = signal.size();
    const std::size_t half = window / 2;
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        prefix[i + 1] = prefix[i] + signal[i];
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= half ? i - half : 0;
        const std::size_t hi = std::min(n, i + half + 1);
        out[i] = (prefix[hi] - prefix[lo]) / double(hi - lo);
    }
    return out;
}

RepetitionEstimate estimate_repetitions(const std::vector<double>& signal, const SegmentationSpec& spec)
{
    validate(spec);
    const std::size_t n = signal.size();
    if (n < 4)
        throw InputError("repetition estimate needs at least 4 frames");
    auto s = smooth(signal, spec.smoothing_window);
    const double mean = std::accumulate(s.begin(), s.end(), 0.0) / double(n);
    for (auto& v : s)
        v -= mean;

    RepetitionEstimate est;
    const double pi2 = 2.0 * std::acos(-1.0);
    double best = 0.0;
    for (std::size_t k = 1; k <= n / 2; ++k) {
        double re = 0.0, im = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            // Reduce k*t mod n first so the angle stays accurate for long signals.
            const double angle = pi2 * double((k * t) % n) / double(n);
            re += s[t] * std::cos(angle);
            im -= s[t] * std::sin(angle);
        }
        const double power = re * re + im * im;
        est.power.push_back(power);
        if (power > best) {
            best = power;
            est.repetitions = k;
        }
    }
    if (best <= 1e-24) {
        est.repetitions = 1;
        est.degenerate = true;
        spdlog::warn("flat signal; assuming a single repetition");
    }
    return est;
}

Segmentation cut_segments(const FrameSequence& seq, std::size_t r, const SegmentationSpec& spec)
{
    validate(spec);
    const std::size_t n = seq.size();
    if (r == 0 || r > n / 2)
        throw InputError("cannot cut " + std::to_string(n) + " frames into " + std::to_string(r) + " segments");
    const auto s = smooth(to_signal(seq), spec.smoothing_window);
    const double period = double(n) / double(r);
    const double w = spec.search_window_fraction * period / 2.0;

    Segmentation out;
    std::size_t prev = 0;
    for (std::size_t i = 1; i < r; ++i) {
        const double center = double(i) * period;
        const auto lo = std::max<std::size_t>(prev + 1, std::size_t(std::max(0.0, std::ceil(center - w))));
        const auto hi = std::min<std::size_t>(n - (r - i), std::size_t(std::floor(center + w)));
        if (lo > hi) {
            out.uniform_fallback = true;
            break;
        }
        std::size_t arg = lo;
        for (std::size_t t = lo + 1; t <= hi; ++t)
            if (s[t] < s[arg])
                arg = t;
        out.cuts.push_back(arg);
        prev = arg;
    }
    if (out.uniform_fallback) {
        spdlog::warn("segment search windows collided; using uniform cuts");
        out.cuts.clear();
        for (std::size_t i = 1; i < r; ++i)
            out.cuts.push_back(std::size_t(std::lround(double(i) * period)));
    }

    std::size_t start = 0;
    for (std::size_t i = 0; i <= out.cuts.size(); ++i) {
        const std::size_t end = i < out.cuts.size() ? out.cuts[i] : n;
        std::vector<Frame> frames(seq.frames().begin() + std::ptrdiff_t(start), seq.frames().begin() + std::ptrdiff_t(end));
        out.segments.push_back(seq.with_frames(std::move(frames)));
        start = end;
    }
    return out;
}

} // namespace subskel
