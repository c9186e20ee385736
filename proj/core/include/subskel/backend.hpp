#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace subskel {

enum class Backend { LinearOvr, NearestCentroid };

std::string to_string(Backend b);
Backend parse_backend(const std::string& text);

/// A fitted multiclass model over fixed-length distance rows.
struct BackendModel {
    Backend kind = Backend::LinearOvr;
    std::vector<std::string> classes; // sorted
    // linear-ovr: per-column standardization, then one weight row per class.
    std::vector<double> mean;
    std::vector<double> scale;
    std::vector<std::vector<double>> weights;
    std::vector<double> bias;
    std::size_t iterations = 0;
    // nearest-centroid: one mean row per class.
    std::vector<std::vector<double>> centroids;

    bool operator==(const BackendModel&) const = default;
};

struct LinearOvrOptions {
    double l2 = 1e-3;
    std::size_t max_iterations = 2000;
    /// Stop once the largest gradient component falls below this.
    double gradient_tolerance = 1e-5;
};

/// One-vs-rest L2-regularized logistic regression on standardized columns,
/// fitted by accelerated full-batch gradient descent from zero weights, or a
/// nearest-centroid model. Throws ConfigError with fewer than two classes and
/// InputError on ragged or empty rows.
BackendModel fit_backend(Backend kind, const std::vector<std::vector<double>>& rows,
                         const std::vector<std::string>& labels, const LinearOvrOptions& options = {});

/// Highest score (linear-ovr) or nearest centroid; ties go to the smaller label.
std::string predict_backend(const BackendModel& model, const std::vector<double>& row);

nlohmann::json to_json(const BackendModel& model);
BackendModel backend_from_json(const nlohmann::json& j);

} // namespace subskel
