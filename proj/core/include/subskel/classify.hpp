#pragma once

#include "subskel/backend.hpp"
#include "subskel/distances.hpp"
#include "subskel/features.hpp"
#include "subskel/index.hpp"
#include "subskel/normalize.hpp"
#include "subskel/vote.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace subskel {

enum class ClassifierKind { KNN_S, KNN_M, DM_S, DM_M };

/// Scale for kNN-m weights: each feature's own smallest distance, or the
/// smallest distance over all features.
enum class VoteScope { PerFeature, Global };

struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::KNN_S;
    std::size_t k = 1;
    Backend backend = Backend::LinearOvr;
    /// Training sequences sampled per class for the matrix columns; empty = all.
    std::optional<std::size_t> columns_per_class;
    DistanceMeasure measure;
    VoteScope vote_scope = VoteScope::PerFeature;
    std::uint64_t seed = 0;

    bool is_knn() const { return kind == ClassifierKind::KNN_S || kind == ClassifierKind::KNN_M; }
    bool is_multi() const { return kind == ClassifierKind::KNN_M || kind == ClassifierKind::DM_M; }
};

/// Accepts "<k>nn-s", "<k>nn-m", "dm-s", "dm-m", optionally followed by
/// ":"-separated options: a backend name, "cols=all|<n>", "vote=per-feature|global".
/// The measure and seed are left at their defaults. Throws ConfigError.
ClassifierSpec parse_classifier(const std::string& text);
/// Inverse of parse_classifier (measure and seed not included).
std::string to_string(const ClassifierSpec& spec);

nlohmann::json to_json(const ClassifierSpec& spec);
ClassifierSpec classifier_from_json(const nlohmann::json& j);

/// A sequence after normalization, feature extraction and simplification.
/// `groups` are simplified one by one; `concat` is built from the unsimplified
/// groups and then simplified.
struct ProcessedSequence {
    std::string label;
    std::vector<Trajectory> groups;
    Trajectory concat;
};

ProcessedSequence process_normalized(const FrameSequence& normalized, const FeatureTemplate& t,
                                     double simplify_eps);

/// Memoized trajectory distances keyed by (feature key, sequence id pair).
/// Ids refer to one fixed sequence collection chosen by the owner; the pair is
/// stored unordered since every measure here is exactly symmetric. Safe for
/// concurrent use.
class DistanceCache {
public:
    explicit DistanceCache(DistanceMeasure measure) : measure_(measure) {}

    double get(const std::string& feature, std::size_t a, const Trajectory& ta, std::size_t b,
               const Trajectory& tb);

    const DistanceMeasure& measure() const { return measure_; }
    std::size_t size() const;
    std::size_t computations() const { return computations_; }

private:
    DistanceMeasure measure_;
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::string, std::unordered_map<std::uint64_t, double>> values_;
    std::size_t computations_ = 0;
};

struct NeighborEvidence {
    std::size_t train_index = 0;
    std::string label;
    double distance = 0.0;
};

struct Prediction {
    std::string label;
    /// kNN: one neighbor table per feature (one table for kNN-s).
    std::vector<std::vector<NeighborEvidence>> neighbors;
    std::vector<Vote> votes;
    /// DM: the query's distance row.
    std::vector<double> dm_row;
    std::size_t distance_computations = 0;
};

/// Matrix column: a training sequence, and for the multi variant a feature.
struct DmColumn {
    std::size_t train_index = 0;
    std::optional<std::size_t> group;
};

struct DistanceMatrix {
    std::vector<std::string> row_labels;
    std::vector<DmColumn> columns;
    std::vector<std::vector<double>> values;
};

/// Trained classifier over processed training sequences.
class Classifier {
public:
    struct Options {
        /// When set, distances between a query with a known id and training
        /// items come from the cache. `train_ids` maps training positions into
        /// the cache's id space.
        DistanceCache* cache = nullptr;
        std::vector<std::size_t> train_ids;
        /// Build metric indexes for kNN queries (ignored for DTW).
        bool use_index = true;
        std::size_t threads = 1;
    };

    Classifier(ClassifierSpec spec, std::vector<ProcessedSequence> train, std::vector<std::string> feature_keys,
               Options options);
    Classifier(ClassifierSpec spec, std::vector<ProcessedSequence> train, std::vector<std::string> feature_keys,
               std::vector<DmColumn> columns, BackendModel backend);

    /// `query_id` is the query's id in the cache's id space, if any.
    Prediction predict(const ProcessedSequence& query, std::optional<std::size_t> query_id = {}) const;

    /// Distance matrix rows for the given sequences against this model's columns.
    DistanceMatrix distance_matrix(const std::vector<ProcessedSequence>& rows) const;

    const ClassifierSpec& spec() const { return spec_; }
    const std::vector<ProcessedSequence>& training() const { return train_; }
    const std::vector<DmColumn>& columns() const { return columns_; }
    const BackendModel& backend() const { return backend_; }
    /// Training distance matrix (DM kinds only).
    const std::vector<std::vector<double>>& training_matrix() const { return train_matrix_; }

private:
    const Trajectory& feature_of(const ProcessedSequence& s, std::optional<std::size_t> group) const;
    std::string key_of(std::optional<std::size_t> group) const;
    double distance(const ProcessedSequence& q, std::optional<std::size_t> qid, std::size_t train_pos,
                    std::optional<std::size_t> group) const;
    std::vector<NeighborEvidence> nearest(const ProcessedSequence& q, std::optional<std::size_t> qid,
                                          std::optional<std::size_t> group, std::size_t& computations) const;
    std::vector<double> dm_row(const ProcessedSequence& q, std::optional<std::size_t> qid) const;
    void build_indexes();

    ClassifierSpec spec_;
    std::vector<ProcessedSequence> train_;
    std::vector<std::string> feature_keys_;
    Options options_;
    // Index per feature, last one for the concatenation.
    std::vector<std::shared_ptr<const MetricIndex>> indexes_;
    std::vector<DmColumn> columns_;
    std::vector<std::vector<double>> train_matrix_;
    BackendModel backend_;
};

/// Sampled matrix columns. With columns_per_class = n, n training sequences
/// per class (fewer if the class is smaller) are drawn with the spec seed.
std::vector<DmColumn> select_columns(const ClassifierSpec& spec, const std::vector<std::string>& labels,
                                     std::size_t feature_count);

std::vector<std::string> feature_keys(const FeatureTemplate& t);

/// Everything needed to classify raw sequences.
struct TrainedModel {
    Skeleton skeleton;
    NormalizationSpec normalization;
    StandardLengths lengths;
    std::optional<Frame> at_rest_pose;
    FeatureTemplate feature_template;
    double simplify_eps = 0.0;
    std::shared_ptr<const Classifier> classifier;
    /// Free-form provenance written alongside the model (e.g. a mining trace).
    nlohmann::json metadata = nlohmann::json::object();

    ProcessedSequence process(const FrameSequence& seq) const;
    Prediction classify(const FrameSequence& seq) const;
};

struct TrainOptions {
    double simplify_eps = 0.0;
    std::size_t threads = 1;
    bool use_index = true;
};

/// Normalizes (with limb statistics from `train` only), extracts, simplifies
/// and fits the classifier. Throws ConfigError when k exceeds the training set.
TrainedModel train_model(const LabeledDataset& train, const ClassifierSpec& spec, const FeatureTemplate& t,
                         const NormalizationSpec& normalization, const TrainOptions& options = {});

nlohmann::json to_json(const TrainedModel& model);
TrainedModel model_from_json(const nlohmann::json& j);
void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

/// CSV with a header row of column names and one row per sequence.
void write_distance_matrix_csv(std::ostream& out, const DistanceMatrix& m, const TrainedModel& model);

} // namespace subskel
