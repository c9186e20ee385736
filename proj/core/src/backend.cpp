#include "subskel/backend.hpp"

#include "subskel/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>

namespace subskel {

using nlohmann::json;

std::string to_string(Backend b)
{
    return b == Backend::LinearOvr ? "linear-ovr" : "nearest-centroid";
}

Backend parse_backend(const std::string& text)
{
    if (text == "linear-ovr")
        return Backend::LinearOvr;
    if (text == "nearest-centroid")
        return Backend::NearestCentroid;
    throw ConfigError("unknown backend '" + text + "' (expected linear-ovr or nearest-centroid)");
}

namespace {

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& rows)
{
    if (rows.empty() || rows.front().empty())
        throw InputError("backend training needs non-empty rows");
    const auto d = rows.front().size();
    Eigen::MatrixXd x(rows.size(), d);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != d)
            throw InputError("backend rows differ in length");
        for (std::size_t j = 0; j < d; ++j)
            x(i, j) = rows[i][j];
    }
    return x;
}

// Largest eigenvalue of a symmetric PSD matrix by power iteration from a fixed
// start vector.
double top_eigenvalue(const Eigen::MatrixXd& gram)
{
    Eigen::VectorXd v = Eigen::VectorXd::Ones(gram.rows()).normalized();
    double lambda = 0.0;
    for (int it = 0; it < 200; ++it) {
        const Eigen::VectorXd w = gram * v;
        const double n = w.norm();
        if (n == 0.0)
            return 0.0;
        const double next = v.dot(w);
        v = w / n;
        if (std::abs(next - lambda) <= 1e-9 * next) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return lambda;
}

void fit_linear_ovr(BackendModel& m, Eigen::MatrixXd x, const std::vector<int>& y,
                    const LinearOvrOptions& opt)
{
    const auto n = x.rows();
    const auto d = x.cols();
    const auto c = static_cast<Eigen::Index>(m.classes.size());
    m.mean.resize(d);
    m.scale.resize(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        const double mu = x.col(j).mean();
        const double sd = std::sqrt((x.col(j).array() - mu).square().mean());
        m.mean[j] = mu;
        m.scale[j] = sd > 1e-12 ? sd : 1.0;
        x.col(j) = (x.col(j).array() - mu) / m.scale[j];
    }
    // Bias as an extra unregularized column.
    Eigen::MatrixXd xa(n, d + 1);
    xa << x, Eigen::VectorXd::Ones(n);
    Eigen::MatrixXd target = Eigen::MatrixXd::Zero(n, c);
    for (Eigen::Index i = 0; i < n; ++i)
        target(i, y[i]) = 1.0;

    // Logistic loss curvature is at most 1/4; pad the estimate for safety.
    const double lipschitz = 1.05 * 0.25 * top_eigenvalue(xa.transpose() * xa / double(n)) + opt.l2;
    const double step = 1.0 / lipschitz;
    Eigen::VectorXd reg = Eigen::VectorXd::Constant(d + 1, opt.l2);
    reg(d) = 0.0;

    auto gradient = [&](const Eigen::MatrixXd& w) {
        const Eigen::MatrixXd p = ((-(xa * w).array()).exp() + 1.0).inverse().matrix();
        return Eigen::MatrixXd(xa.transpose() * (p - target) / double(n) + reg.asDiagonal() * w);
    };

    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(d + 1, c);
    Eigen::MatrixXd prev = w;
    Eigen::MatrixXd look = w;
    double t = 1.0;
    std::size_t it = 0;
    for (; it < opt.max_iterations; ++it) {
        const Eigen::MatrixXd g = gradient(look);
        if (g.cwiseAbs().maxCoeff() < opt.gradient_tolerance && it > 0)
            break;
        prev = w;
        w = look - step * g;
        const double t_next = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
        // Restart momentum when it points uphill.
        if ((g.array() * (w - prev).array()).sum() > 0.0) {
            t = 1.0;
            look = w;
            continue;
        }
        look = w + ((t - 1.0) / t_next) * (w - prev);
        t = t_next;
    }
    m.iterations = it;
    m.weights.assign(c, std::vector<double>(d));
    m.bias.assign(c, 0.0);
    for (Eigen::Index k = 0; k < c; ++k) {
        for (Eigen::Index j = 0; j < d; ++j)
            m.weights[k][j] = w(j, k);
        m.bias[k] = w(d, k);
    }
}

} // namespace

BackendModel fit_backend(Backend kind, const std::vector<std::vector<double>>& rows,
                         const std::vector<std::string>& labels, const LinearOvrOptions& options)
{
    if (rows.size() != labels.size())
        throw InputError("backend rows and labels differ in count");
    Eigen::MatrixXd x = to_matrix(rows);
    BackendModel m;
    m.kind = kind;
    m.classes = labels;
    std::sort(m.classes.begin(), m.classes.end());
    m.classes.erase(std::unique(m.classes.begin(), m.classes.end()), m.classes.end());
    if (m.classes.size() < 2)
        throw ConfigError("distance-matrix classifier needs at least two classes");
    std::vector<int> y(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
        y[i] = int(std::lower_bound(m.classes.begin(), m.classes.end(), labels[i]) - m.classes.begin());

    if (kind == Backend::LinearOvr) {
        fit_linear_ovr(m, std::move(x), y, options);
    } else {
        const auto d = x.cols();
        m.centroids.assign(m.classes.size(), std::vector<double>(d, 0.0));
        std::vector<std::size_t> count(m.classes.size(), 0);
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            ++count[y[i]];
            for (Eigen::Index j = 0; j < d; ++j)
                m.centroids[y[i]][j] += x(i, j);
        }
        for (std::size_t k = 0; k < m.classes.size(); ++k)
            for (auto& v : m.centroids[k])
                v /= double(count[k]);
    }
    return m;
}

std::string predict_backend(const BackendModel& m, const std::vector<double>& row)
{
    std::size_t best = 0;
    double best_score = 0.0;
    for (std::size_t k = 0; k < m.classes.size(); ++k) {
        double score = 0.0;
        if (m.kind == Backend::LinearOvr) {
            if (row.size() != m.mean.size())
                throw InputError("distance row has the wrong length for this model");
            score = m.bias[k];
            for (std::size_t j = 0; j < row.size(); ++j)
                score += m.weights[k][j] * (row[j] - m.mean[j]) / m.scale[j];
        } else {
            if (row.size() != m.centroids[k].size())
                throw InputError("distance row has the wrong length for this model");
            for (std::size_t j = 0; j < row.size(); ++j) {
                const double diff = row[j] - m.centroids[k][j];
                score -= diff * diff;
            }
        }
        if (k == 0 || score > best_score) {
            best = k;
            best_score = score;
        }
    }
    return m.classes[best];
}

json to_json(const BackendModel& m)
{
    json j = {{"kind", to_string(m.kind)}, {"classes", m.classes}};
    if (m.kind == Backend::LinearOvr) {
        j["mean"] = m.mean;
        j["scale"] = m.scale;
        j["weights"] = m.weights;
        j["bias"] = m.bias;
        j["iterations"] = m.iterations;
    } else {
        j["centroids"] = m.centroids;
    }
    return j;
}

BackendModel backend_from_json(const json& j)
{
    try {
        BackendModel m;
        m.kind = parse_backend(j.at("kind").get<std::string>());
        m.classes = j.at("classes").get<std::vector<std::string>>();
        if (m.kind == Backend::LinearOvr) {
            m.mean = j.at("mean").get<std::vector<double>>();
            m.scale = j.at("scale").get<std::vector<double>>();
            m.weights = j.at("weights").get<std::vector<std::vector<double>>>();
            m.bias = j.at("bias").get<std::vector<double>>();
            m.iterations = j.value("iterations", std::size_t{0});
        } else {
            m.centroids = j.at("centroids").get<std::vector<std::vector<double>>>();
        }
        return m;
    } catch (const json::exception& e) {
        throw InputError(std::string("backend model: ") + e.what());
    }
}

} // namespace subskel
