#pragma once

#include "subskel/model.hpp"

#include <vector>

namespace subskel {

struct SegmentationSpec {
    /// Odd moving-average width.
    std::size_t smoothing_window = 5;
    /// Fraction of the period searched around each expected cut.
    double search_window_fraction = 0.8;
};

/// Throws ConfigError on an even or zero window or a fraction outside (0, 1].
void validate(const SegmentationSpec& spec);

/// Distance of each frame's stacked coordinates to the first frame's.
std::vector<double> to_signal(const FrameSequence& seq);

/// Centered moving average; the window shrinks near the ends.
std::vector<double> smooth(const std::vector<double>& signal, std::size_t window);

struct RepetitionEstimate {
    std::size_t repetitions = 1;
    /// Set when the signal carries no variation and the count defaulted to 1.
    bool degenerate = false;
    /// Power at frequency index 1..n/2 (element 0 is index 1).
    std::vector<double> power;
};

/// Dominant frequency of the smoothed, mean-removed signal, in cycles per
/// recording. Throws InputError for signals shorter than 4 samples.
RepetitionEstimate estimate_repetitions(const std::vector<double>& signal, const SegmentationSpec& spec = {});

struct Segmentation {
    /// Interior cut frames, strictly increasing; segment i spans
    /// [cut[i-1], cut[i]) with implicit cuts at 0 and n.
    std::vector<std::size_t> cuts;
    bool uniform_fallback = false;
    std::vector<FrameSequence> segments;
};

/// Places each cut at the smoothed-signal minimum near i * n / r. Throws
/// InputError unless 1 <= r <= n / 2.
Segmentation cut_segments(const FrameSequence& seq, std::size_t r, const SegmentationSpec& spec = {});

} // namespace subskel
