#include "subskel/synthetic.hpp"

#include "subskel/error.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace subskel {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kHarmonics = 4;

// Smooth path with p(0) = p(1) = 0: a main arch sin(pi u) plus smaller
// harmonics. Since |sin(n x)| <= n |sin x| and the harmonic terms together
// have at most half the arch's norm, |p(u)| >= |arch| sin(pi u) / 2, so the
// joint only comes back to rest at the ends of the motion.
struct Pattern {
    double amp[kHarmonics][3];

    Vec3 at(double u) const
    {
        Vec3 v{0, 0, 0};
        for (int h = 0; h < kHarmonics; ++h) {
            const double s = std::sin(kPi * (h + 1) * u) / (h + 1);
            v = v + Vec3{amp[h][0], amp[h][1], amp[h][2]} * s;
        }
        return v;
    }
};

Pattern random_pattern(Rng& rng, double amplitude)
{
    Pattern p{};
    // Uniform direction for the arch.
    Vec3 dir{0, 0, 0};
    while (norm(dir) < 1e-3)
        dir = Vec3{rng.normal(0, 1), rng.normal(0, 1), rng.normal(0, 1)};
    dir = dir * (amplitude / norm(dir));
    p.amp[0][0] = dir.x;
    p.amp[0][1] = dir.y;
    p.amp[0][2] = dir.z;
    // Harmonic vectors, each within a ball of radius amplitude / 6.
    for (int h = 1; h < kHarmonics; ++h) {
        Vec3 v{0, 0, 0};
        do
            v = Vec3{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        while (norm(v) > 1.0);
        v = v * (amplitude / 6.0);
        p.amp[h][0] = v.x;
        p.amp[h][1] = v.y;
        p.amp[h][2] = v.z;
    }
    return p;
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t z = a * 0x9E3779B97F4A7C15ull + b + 0x632BE59BD9B4E019ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Monotone piecewise-linear map from normalized time to phase, with segment
// speeds jittered in [1 - jitter, 1 + jitter].
class TimeWarp {
public:
    TimeWarp(Rng& rng, double jitter, int segments = 4)
    {
        std::vector<double> dur(segments);
        for (auto& d : dur)
            d = jitter > 0.0 ? 1.0 / (1.0 + rng.uniform(-jitter, jitter)) : 1.0;
        double total = 0.0;
        for (double d : dur)
            total += d;
        knots_.push_back(0.0);
        for (double d : dur)
            knots_.push_back(knots_.back() + d / total);
        knots_.back() = 1.0;
    }

    double operator()(double t) const
    {
        const std::size_t segs = knots_.size() - 1;
        for (std::size_t k = 0; k < segs; ++k)
            if (t <= knots_[k + 1] || k + 1 == segs) {
                const double span = knots_[k + 1] - knots_[k];
                const double local = span > 0 ? (t - knots_[k]) / span : 0.0;
                return (double(k) + std::clamp(local, 0.0, 1.0)) / double(segs);
            }
        return 1.0;
    }

private:
    std::vector<double> knots_;
};

void check(const SyntheticSpec& spec)
{
    const auto n = spec.skeleton.size();
    if (spec.classes == 0 || spec.sequences_per_class == 0 || spec.subjects == 0)
        throw ConfigError("synthetic spec needs positive class, sequence and subject counts");
    if (spec.discriminative.empty())
        throw ConfigError("synthetic spec needs at least one discriminative joint");
    if (!(spec.noise_sd >= 0.0) || !(spec.translation_sd >= 0.0) || spec.speed_jitter < 0.0 ||
        spec.speed_jitter >= 1.0)
        throw ConfigError("synthetic noise must be >= 0 and speed jitter in [0, 1)");
    if (spec.frames_mean < 2.0 || spec.frames_sd < 0.0)
        throw ConfigError("synthetic frame count mean must be >= 2");
    std::size_t combos = 1;
    for (const auto& d : spec.discriminative) {
        if (d.joint >= n || (d.reference && (*d.reference >= n || *d.reference == d.joint)))
            throw ConfigError("discriminative joint out of range");
        if (d.levels == 0)
            throw ConfigError("discriminative joint needs at least one level");
        combos *= d.levels;
    }
    if (spec.assignment == LevelAssignment::Factorial && combos < spec.classes)
        throw ConfigError("discriminative levels give " + std::to_string(combos) + " combinations for " +
                          std::to_string(spec.classes) + " classes");
    for (auto w : spec.wobble_joints)
        if (w >= n)
            throw ConfigError("wobble joint out of range");
    if (spec.rest_pose)
        validate_frame(*spec.rest_pose, n, "synthetic rest pose");
}

struct Generator {
    const SyntheticSpec& spec;
    Frame rest;
    // patterns[d][level]
    std::vector<std::vector<Pattern>> patterns;

    explicit Generator(const SyntheticSpec& s) : spec(s)
    {
        check(spec);
        rest = spec.rest_pose ? *spec.rest_pose : default_rest_pose(spec.skeleton, spec.seed);
        for (std::size_t d = 0; d < spec.discriminative.size(); ++d) {
            Rng rng(mix(spec.seed, 1000 + d));
            std::vector<Pattern> levels;
            for (std::size_t l = 0; l < spec.discriminative[d].levels; ++l)
                levels.push_back(random_pattern(rng, spec.motion_amplitude));
            patterns.push_back(std::move(levels));
        }
    }

    std::size_t level(std::size_t c, std::size_t d) const
    {
        if (spec.assignment == LevelAssignment::Redundant)
            return c % spec.discriminative[d].levels;
        std::size_t div = 1;
        for (std::size_t e = 0; e < d; ++e)
            div *= spec.discriminative[e].levels;
        return (c / div) % spec.discriminative[d].levels;
    }

    // Pose at phase u for class c with per-sequence wobble paths.
    Frame pose(std::size_t c, double u, const std::vector<Pattern>& wobble) const
    {
        Frame f = rest;
        for (std::size_t w = 0; w < spec.wobble_joints.size(); ++w)
            f[spec.wobble_joints[w]] = rest[spec.wobble_joints[w]] + wobble[w].at(u);
        for (std::size_t d = 0; d < spec.discriminative.size(); ++d) {
            const auto& dj = spec.discriminative[d];
            const Vec3 offset = patterns[d][level(c, d)].at(u);
            if (dj.reference)
                f[dj.joint] = f[*dj.reference] + (rest[dj.joint] - rest[*dj.reference]) + offset;
            else
                f[dj.joint] = rest[dj.joint] + offset;
        }
        return f;
    }

    std::vector<Pattern> wobble(Rng& rng) const
    {
        std::vector<Pattern> out;
        for (std::size_t w = 0; w < spec.wobble_joints.size(); ++w)
            out.push_back(random_pattern(rng, spec.wobble_amplitude));
        return out;
    }

    std::size_t frame_count(Rng& rng, double mean) const
    {
        const double n = spec.frames_sd > 0.0 ? mean + spec.frames_sd * rng.normal() : mean;
        return static_cast<std::size_t>(std::lround(std::max(8.0, n)));
    }

    void finish(Rng& rng, std::vector<Frame>& frames) const
    {
        const Vec3 shift = spec.translation_sd > 0.0
                               ? Vec3{rng.normal(), rng.normal(), rng.normal()} * spec.translation_sd
                               : Vec3{0, 0, 0};
        for (auto& f : frames)
            for (auto& p : f) {
                p = p + shift;
                if (spec.noise_sd > 0.0)
                    p = p + Vec3{rng.normal(), rng.normal(), rng.normal()} * spec.noise_sd;
            }
    }
};

} // namespace

std::string synthetic_label(std::size_t c)
{
    std::string digits = std::to_string(c);
    return "c" + std::string(digits.size() < 2 ? 2 - digits.size() : 0, '0') + digits;
}

Frame default_rest_pose(const Skeleton& skeleton, std::uint64_t seed)
{
    Rng rng(mix(seed, 7));
    Frame pose(skeleton.size(), Vec3{0, 0, 0});
    std::vector<bool> seen(skeleton.size(), false);
    std::queue<JointIndex> q;
    q.push(0);
    seen[0] = true;
    while (!q.empty()) {
        const auto j = q.front();
        q.pop();
        for (auto c : skeleton.neighbors(j))
            if (!seen[c]) {
                seen[c] = true;
                Vec3 dir{rng.normal(), rng.normal(), rng.normal()};
                const double n = norm(dir);
                dir = n > 0 ? dir * (1.0 / n) : Vec3{1, 0, 0};
                pose[c] = pose[j] + dir * 0.3;
                q.push(c);
            }
    }
    return pose;
}

LabeledDataset generate(const SyntheticSpec& spec)
{
    const Generator gen(spec);
    LabeledDataset ds{spec.skeleton, {}, gen.rest};
    for (std::size_t c = 0; c < spec.classes; ++c)
        for (std::size_t s = 0; s < spec.sequences_per_class; ++s) {
            Rng rng(mix(mix(spec.seed, c + 1), s + 1));
            const auto n = gen.frame_count(rng, spec.frames_mean);
            const TimeWarp warp(rng, spec.speed_jitter);
            const auto wob = gen.wobble(rng);
            std::vector<Frame> frames;
            for (std::size_t i = 0; i < n; ++i)
                frames.push_back(gen.pose(c, warp(double(i) / double(n - 1)), wob));
            gen.finish(rng, frames);
            ds.sequences.emplace_back(synthetic_label(c), "s" + std::to_string(s % spec.subjects), spec.fps,
                                      std::move(frames));
        }
    return ds;
}

FrameSequence generate_repetitions(const SyntheticSpec& spec, std::size_t c, std::size_t repetitions,
                                   double jitter, std::uint64_t seed)
{
    const Generator gen(spec);
    if (c >= spec.classes || repetitions == 0)
        throw ConfigError("repetition request out of range");
    Rng rng(mix(mix(spec.seed, 0xABCDu + c), seed));
    std::vector<Frame> frames;
    for (std::size_t r = 0; r < repetitions; ++r) {
        const double speed = 1.0 + (jitter > 0 ? rng.uniform(-jitter, jitter) : 0.0);
        const auto n = std::max<std::size_t>(8, std::size_t(std::lround(spec.frames_mean / speed)));
        const TimeWarp warp(rng, spec.speed_jitter);
        const auto wob = gen.wobble(rng);
        // The last frame of one repetition equals the first of the next, so skip it.
        for (std::size_t i = 0; i + 1 < n; ++i)
            frames.push_back(gen.pose(c, warp(double(i) / double(n - 1)), wob));
    }
    frames.push_back(gen.rest);
    gen.finish(rng, frames);
    return FrameSequence(synthetic_label(c), "s0", spec.fps, std::move(frames));
}

} // namespace subskel
