#pragma once

#include "subskel/model.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace subskel {

struct FixedCountPerClass {
    std::size_t count = 2;
};

/// Training count per class is ceil(fraction * n), at least 1.
struct FractionPerClass {
    double fraction = 0.2;
};

struct CrossSubject {
    std::vector<std::string> train_subjects;
};

/// Stratified k-fold; `fold` is the held-out test fold.
struct KFold {
    std::size_t folds = 5;
    std::size_t fold = 0;
};

using SplitSpec = std::variant<FixedCountPerClass, FractionPerClass, CrossSubject, KFold>;

/// Parses "count:2", "fraction:0.2", "subjects:a,b,c", "kfold:5:0".
SplitSpec parse_split_spec(const std::string& text);
std::string to_string(const SplitSpec& spec);

struct SplitResult {
    LabeledDataset train;
    LabeledDataset test;
    /// Positions in the source dataset, ascending.
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
};

/// Deterministic for a given (dataset, spec, seed). Both halves keep the
/// source order of their sequences.
SplitResult split_train_test(const LabeledDataset& dataset, const SplitSpec& spec,
                             std::uint64_t seed);

/// Per-class training count for fraction mode.
std::size_t fraction_count(double fraction, std::size_t class_size);

} // namespace subskel
