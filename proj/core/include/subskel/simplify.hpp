#pragma once

#include "subskel/model.hpp"

namespace subskel {

struct SimplifySpec {
    /// Error bound under the continuous Fréchet distance, in coordinate units.
    double epsilon = 0.0;
};

/// Greedy error-bounded simplification. From each anchor vertex the scan
/// extends forward (exponential probing, then bisection) to the farthest vertex
/// j whose shortcut segment lies within epsilon, in the continuous Fréchet
/// sense, of the skipped subchain.
///
/// The result is a vertex subsequence with both endpoints kept and
/// continuous_frechet(p, result) <= epsilon. epsilon == 0 only drops vertices
/// that exactly repeat their predecessor.
Trajectory simplify(const Trajectory& p, const SimplifySpec& spec);

} // namespace subskel
