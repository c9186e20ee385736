#pragma once

#include "subskel/classify.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace subskel {

struct PredictionRow {
    std::size_t index = 0;
    std::string truth;
    std::string predicted;
    /// Nearest neighbors per feature, e.g. "3:c01(0.52) 5:c01(0.61)".
    std::string evidence;
    std::size_t distance_computations = 0;
    double latency_ms = 0.0;
};

struct ClassAccuracy {
    std::string label;
    std::size_t total = 0;
    std::size_t correct = 0;
};

struct LatencySummary {
    double mean = 0.0, p50 = 0.0, p90 = 0.0, p99 = 0.0;
};

struct Report {
    /// Ordered key/value lines describing the run (seed, classifier, ...).
    std::vector<std::pair<std::string, std::string>> header;
    std::vector<PredictionRow> predictions;
    double accuracy = 0.0;
    std::vector<ClassAccuracy> per_class;
    /// (truth, predicted) -> count.
    std::map<std::pair<std::string, std::string>, std::size_t> confusion;
    double mean_distance_computations = 0.0;
    /// Wall-clock figures; not reproducible across runs.
    LatencySummary latency;
};

/// Nearest-rank percentile of an unsorted sample (q in [0, 100]).
double percentile(std::vector<double> values, double q);

/// Classifies every test sequence, timing each query. Queries run in
/// parallel on `threads` workers; results are assembled in input order.
Report evaluate_model(const TrainedModel& model, const LabeledDataset& test, std::size_t threads = 1);

/// Human-readable summary. Latency lines are omitted when include_latency is false.
void write_report_text(std::ostream& out, const Report& r, bool include_latency = true);
/// Long-form CSV: section,key,value rows.
void write_report_csv(std::ostream& out, const Report& r, bool include_latency = true);
/// One row per query: index,true_label,predicted_label,evidence, plus
/// distance_computations when include_stats is set.
void write_predictions_csv(std::ostream& out, const Report& r, bool include_stats = false);

std::string format_number(double v);

} // namespace subskel
