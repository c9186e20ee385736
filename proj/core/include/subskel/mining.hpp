#pragma once

#include "subskel/classify.hpp"
#include "subskel/features.hpp"
#include "subskel/normalize.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace subskel {

struct MiningConfig {
    std::vector<CanonicalSubSkeleton> candidates;
    /// Classifier and measure evaluated for each candidate template.
    ClassifierSpec classifier;
    /// Each entry runs a full greedy search; the best final accuracy wins.
    std::vector<NormalizationSpec> normalizations{NormalizationSpec{}};
    std::uint64_t split_seed = 0;
    std::optional<std::size_t> max_template_size;
    /// Share of each class used as the inner training part; the rest is the
    /// inner evaluation part.
    double inner_train_fraction = 1.0 / 3.0;
    double simplify_eps = 0.0;
    std::size_t threads = 1;
};

struct TraceEntry {
    std::size_t candidate = 0;
    std::string name;
    double accuracy = 0.0;
    /// Other candidates that reached the same accuracy in this step.
    std::size_t tied = 0;
};

struct SweepOutcome {
    NormalizationSpec normalization;
    FeatureTemplate feature_template;
    std::vector<TraceEntry> trace;
    double accuracy = 0.0;
    /// Limb lengths computed from the inner training part.
    StandardLengths lengths;
};

struct MiningResult {
    FeatureTemplate feature_template;
    NormalizationSpec normalization;
    ClassifierSpec classifier;
    std::vector<TraceEntry> trace;
    double accuracy = 0.0;
    std::vector<SweepOutcome> sweep;
    std::vector<std::size_t> inner_train;
    std::vector<std::size_t> inner_test;
};

/// Greedy template search: starting from the empty template, add the
/// candidate whose adapted union gives the best inner accuracy while it
/// strictly improves on the best so far (baseline 0). Accuracy ties go to the
/// earlier candidate; sweep ties to the smaller template, then the earlier
/// normalization. Throws ConfigError with fewer than two classes, a class
/// with fewer than two sequences, or no candidates.
MiningResult mine(const LabeledDataset& train, const MiningConfig& cfg);

/// Fraction of `dt` classified correctly by a classifier trained on `dr`.
/// Limb statistics come from `dr` only.
double inner_accuracy(const FeatureTemplate& t, const LabeledDataset& dr, const LabeledDataset& dt,
                      const ClassifierSpec& classifier, const NormalizationSpec& normalization,
                      double simplify_eps = 0.0);

nlohmann::json to_json(const MiningResult& result, const Skeleton& skeleton);

} // namespace subskel
