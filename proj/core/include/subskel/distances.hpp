#pragma once

#include "subskel/model.hpp"

#include <limits>
#include <string>

namespace subskel {

enum class MeasureKind { CF, DF, DTW };

struct DistanceMeasure {
    MeasureKind kind = MeasureKind::DTW;
    /// Relative tolerance of the continuous Fréchet value search; unused otherwise.
    double cf_tolerance = 1e-6;

    friend bool operator==(const DistanceMeasure&, const DistanceMeasure&) = default;
};

/// CF and DF satisfy the triangle inequality; DTW does not.
constexpr bool is_metric(MeasureKind kind) { return kind != MeasureKind::DTW; }

std::string to_string(MeasureKind kind);
/// Accepts "cf", "df", "dtw" (any case).
MeasureKind parse_measure(const std::string& text);

/// Euclidean distance between vertex i of P and vertex j of Q.
double vertex_distance(const Trajectory& p, std::size_t i, const Trajectory& q, std::size_t j);

/// Min over monotone vertex couplings of the max matched distance.
/// O(mn) time, O(min(m, n)) memory.
double discrete_frechet(const Trajectory& p, const Trajectory& q);

/// Min over monotone vertex couplings of the summed matched distance.
double dtw(const Trajectory& p, const Trajectory& q);

/// True iff the continuous Fréchet distance is at most eps, decided by
/// reachability in the free-space diagram.
bool cf_decision(const Trajectory& p, const Trajectory& q, double eps);

/// Value v with cf_decision(v) true and cf_decision(v * (1 - tolerance)) false,
/// found by bisection between the endpoint lower bound and the discrete
/// Fréchet upper bound.
double continuous_frechet(const Trajectory& p, const Trajectory& q, double tolerance = 1e-6);

double compute_distance(const DistanceMeasure& measure, const Trajectory& p, const Trajectory& q);

/// Same value as compute_distance when it is at most `cutoff`; otherwise may
/// return +infinity without finishing the computation.
double compute_distance_bounded(const DistanceMeasure& measure, const Trajectory& p,
                                const Trajectory& q, double cutoff);

constexpr double kInfinity = std::numeric_limits<double>::infinity();

} // namespace subskel
