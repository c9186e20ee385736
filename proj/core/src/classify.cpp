#include "subskel/classify.hpp"

#include "subskel/dataset_io.hpp"
#include "subskel/error.hpp"
#include "subskel/parallel.hpp"
#include "subskel/random.hpp"
#include "subskel/simplify.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>

namespace subskel {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream in(s);
    for (std::string part; std::getline(in, part, sep);)
        out.push_back(part);
    return out;
}

std::size_t parse_positive(const std::string& text, const std::string& what)
{
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || v == 0)
        throw ConfigError(what + " must be a positive integer, got '" + text + "'");
    return v;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

std::string format_double(double v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace

ClassifierSpec parse_classifier(const std::string& text)
{
    const auto parts = split(text, ':');
    if (parts.empty())
        throw ConfigError("empty classifier spec");
    ClassifierSpec spec;
    const std::string& head = parts[0];
    if (head == "dm-s") {
        spec.kind = ClassifierKind::DM_S;
    } else if (head == "dm-m") {
        spec.kind = ClassifierKind::DM_M;
    } else if (head.size() > 4 && (head.ends_with("nn-s") || head.ends_with("nn-m"))) {
        spec.kind = head.back() == 's' ? ClassifierKind::KNN_S : ClassifierKind::KNN_M;
        spec.k = parse_positive(head.substr(0, head.size() - 4), "k");
    } else {
        throw ConfigError("unknown classifier '" + head + "' (expected <k>nn-s, <k>nn-m, dm-s or dm-m)");
    }
    for (std::size_t i = 1; i < parts.size(); ++i) {
        const auto& opt = parts[i];
        if (opt == "linear-ovr" || opt == "nearest-centroid") {
            spec.backend = parse_backend(opt);
        } else if (opt.starts_with("cols=")) {
            const auto v = opt.substr(5);
            spec.columns_per_class = v == "all" ? std::nullopt : std::optional(parse_positive(v, "cols"));
        } else if (opt == "vote=global") {
            spec.vote_scope = VoteScope::Global;
        } else if (opt == "vote=per-feature") {
            spec.vote_scope = VoteScope::PerFeature;
        } else {
            throw ConfigError("unknown classifier option '" + opt + "'");
        }
    }
    return spec;
}

std::string to_string(const ClassifierSpec& spec)
{
    switch (spec.kind) {
    case ClassifierKind::KNN_S: return std::to_string(spec.k) + "nn-s";
    case ClassifierKind::KNN_M:
        return std::to_string(spec.k) + "nn-m" + (spec.vote_scope == VoteScope::Global ? ":vote=global" : "");
    case ClassifierKind::DM_S:
    case ClassifierKind::DM_M:
        return std::string(spec.kind == ClassifierKind::DM_S ? "dm-s:" : "dm-m:") + to_string(spec.backend) +
               (spec.columns_per_class ? ":cols=" + std::to_string(*spec.columns_per_class) : "");
    }
    return "?";
}

json to_json(const ClassifierSpec& spec)
{
    return {{"classifier", to_string(spec)},
            {"measure", to_string(spec.measure.kind)},
            {"cf_tolerance", spec.measure.cf_tolerance},
            {"seed", spec.seed}};
}

ClassifierSpec classifier_from_json(const json& j)
{
    try {
        ClassifierSpec spec = parse_classifier(j.at("classifier").get<std::string>());
        spec.measure.kind = parse_measure(j.at("measure").get<std::string>());
        spec.measure.cf_tolerance = j.value("cf_tolerance", spec.measure.cf_tolerance);
        spec.seed = j.value("seed", std::uint64_t{0});
        return spec;
    } catch (const json::exception& e) {
        throw InputError(std::string("classifier spec: ") + e.what());
    }
}

ProcessedSequence process_normalized(const FrameSequence& normalized, const FeatureTemplate& t,
                                     double simplify_eps)
{
    auto fts = extract_feature_trajectories(normalized, t);
    ProcessedSequence out;
    out.label = normalized.label();
    out.concat = concat_features(fts);
    if (simplify_eps > 0.0)
        out.concat = simplify(out.concat, {simplify_eps});
    for (auto& f : fts)
        out.groups.push_back(simplify_eps > 0.0 ? simplify(f.trajectory, {simplify_eps}) : std::move(f.trajectory));
    return out;
}

double DistanceCache::get(const std::string& feature, std::size_t a, const Trajectory& ta, std::size_t b,
                          const Trajectory& tb)
{
    const bool swap = b < a;
    const std::uint64_t key = (std::uint64_t(swap ? b : a) << 32) | std::uint64_t(swap ? a : b);
    {
        std::shared_lock lock(mutex_);
        if (auto f = values_.find(feature); f != values_.end())
            if (auto it = f->second.find(key); it != f->second.end())
                return it->second;
    }
    const double d = swap ? compute_distance(measure_, tb, ta) : compute_distance(measure_, ta, tb);
    std::unique_lock lock(mutex_);
    values_[feature].emplace(key, d);
    ++computations_;
    return d;
}

std::size_t DistanceCache::size() const
{
    std::shared_lock lock(mutex_);
    std::size_t n = 0;
    for (const auto& [f, m] : values_)
        n += m.size();
    return n;
}

std::vector<std::string> feature_keys(const FeatureTemplate& t)
{
    std::vector<std::string> keys;
    for (const auto& g : t.groups())
        keys.push_back(g.key());
    return keys;
}

std::vector<DmColumn> select_columns(const ClassifierSpec& spec, const std::vector<std::string>& labels,
                                     std::size_t feature_count)
{
    std::vector<std::size_t> chosen;
    if (!spec.columns_per_class) {
        chosen.resize(labels.size());
        std::iota(chosen.begin(), chosen.end(), std::size_t{0});
    } else {
        std::map<std::string, std::vector<std::size_t>> by_class;
        for (std::size_t i = 0; i < labels.size(); ++i)
            by_class[labels[i]].push_back(i);
        Rng rng(spec.seed);
        for (auto& [label, members] : by_class) {
            rng.shuffle(members);
            const auto n = std::min(*spec.columns_per_class, members.size());
            chosen.insert(chosen.end(), members.begin(), members.begin() + std::ptrdiff_t(n));
        }
        std::sort(chosen.begin(), chosen.end());
    }
    std::vector<DmColumn> cols;
    if (spec.kind == ClassifierKind::DM_M) {
        for (std::size_t g = 0; g < feature_count; ++g)
            for (auto j : chosen)
                cols.push_back({j, g});
    } else {
        for (auto j : chosen)
            cols.push_back({j, std::nullopt});
    }
    return cols;
}

Classifier::Classifier(ClassifierSpec spec, std::vector<ProcessedSequence> train,
                       std::vector<std::string> feature_keys, Options options)
    : spec_(spec), train_(std::move(train)), feature_keys_(std::move(feature_keys)), options_(std::move(options))
{
    if (train_.empty())
        throw InputError("cannot train a classifier on an empty training set");
    if (options_.cache && options_.train_ids.size() != train_.size())
        throw ConfigError("cache ids must cover every training sequence");
    if (spec_.is_knn()) {
        if (spec_.k == 0 || spec_.k > train_.size())
            throw ConfigError("k = " + std::to_string(spec_.k) + " exceeds the " + std::to_string(train_.size()) +
                              " training sequences");
        if (options_.use_index && !options_.cache)
            build_indexes();
        return;
    }
    std::vector<std::string> labels;
    for (const auto& t : train_)
        labels.push_back(t.label);
    columns_ = select_columns(spec_, labels, feature_keys_.size());
    train_matrix_.resize(train_.size());
    parallel_for(train_.size(), options_.threads, [&](std::size_t i) {
        train_matrix_[i] = dm_row(train_[i], options_.cache ? std::optional(options_.train_ids[i]) : std::nullopt);
    });
    backend_ = fit_backend(spec_.backend, train_matrix_, labels);
}

Classifier::Classifier(ClassifierSpec spec, std::vector<ProcessedSequence> train,
                       std::vector<std::string> feature_keys, std::vector<DmColumn> columns, BackendModel backend)
    : spec_(spec), train_(std::move(train)), feature_keys_(std::move(feature_keys)), columns_(std::move(columns)),
      backend_(std::move(backend))
{
    if (train_.empty())
        throw InputError("model has no training sequences");
    if (spec_.is_knn()) {
        if (spec_.k > train_.size())
            throw ConfigError("model k exceeds its training set");
        build_indexes();
    }
    for (const auto& c : columns_)
        if (c.train_index >= train_.size() || (c.group && *c.group >= feature_keys_.size()))
            throw InputError("model matrix column out of range");
}

void Classifier::build_indexes()
{
    if (!is_metric(spec_.measure.kind))
        return;
    auto make = [&](std::optional<std::size_t> group) {
        std::vector<Trajectory> entries;
        for (const auto& t : train_)
            entries.push_back(feature_of(t, group));
        return std::make_shared<const MetricIndex>(std::move(entries), spec_.measure, 0, spec_.seed,
                                                   options_.threads);
    };
    if (spec_.kind == ClassifierKind::KNN_M)
        for (std::size_t g = 0; g < feature_keys_.size(); ++g)
            indexes_.push_back(make(g));
    indexes_.push_back(make(std::nullopt));
}

const Trajectory& Classifier::feature_of(const ProcessedSequence& s, std::optional<std::size_t> group) const
{
    if (!group)
        return s.concat;
    if (*group >= s.groups.size())
        throw InputError("sequence is missing feature " + std::to_string(*group));
    return s.groups[*group];
}

std::string Classifier::key_of(std::optional<std::size_t> group) const
{
    if (group)
        return feature_keys_.at(*group);
    std::string key;
    for (const auto& k : feature_keys_)
        key += (key.empty() ? "" : "|") + k;
    return key;
}

double Classifier::distance(const ProcessedSequence& q, std::optional<std::size_t> qid, std::size_t pos,
                            std::optional<std::size_t> group) const
{
    if (options_.cache && qid)
        return options_.cache->get(key_of(group), *qid, feature_of(q, group), options_.train_ids[pos],
                                   feature_of(train_[pos], group));
    return compute_distance(spec_.measure, feature_of(q, group), feature_of(train_[pos], group));
}

std::vector<NeighborEvidence> Classifier::nearest(const ProcessedSequence& q, std::optional<std::size_t> qid,
                                                  std::optional<std::size_t> group, std::size_t& computations) const
{
    std::vector<Neighbor> found;
    if (!indexes_.empty() && !(options_.cache && qid)) {
        const auto& index = group ? indexes_.at(*group) : indexes_.back();
        QueryStats stats;
        found = index->knn(feature_of(q, group), spec_.k, &stats);
        computations += stats.distance_computations;
    } else {
        for (std::size_t i = 0; i < train_.size(); ++i)
            found.push_back({i, distance(q, qid, i, group)});
        computations += train_.size();
        std::stable_sort(found.begin(), found.end(),
                         [](const Neighbor& a, const Neighbor& b) { return a.distance < b.distance; });
        found.resize(spec_.k);
    }
    std::vector<NeighborEvidence> out;
    for (const auto& n : found)
        out.push_back({n.id, train_[n.id].label, n.distance});
    return out;
}

std::vector<double> Classifier::dm_row(const ProcessedSequence& q, std::optional<std::size_t> qid) const
{
    std::vector<double> row;
    row.reserve(columns_.size());
    for (const auto& c : columns_)
        row.push_back(distance(q, qid, c.train_index, c.group));
    return row;
}

Prediction Classifier::predict(const ProcessedSequence& q, std::optional<std::size_t> qid) const
{
    auto labeled = [](const std::vector<NeighborEvidence>& nb) {
        std::vector<LabeledDistance> out;
        for (const auto& n : nb)
            out.push_back({n.label, n.distance});
        return out;
    };
    Prediction p;
    switch (spec_.kind) {
    case ClassifierKind::KNN_S: {
        p.neighbors.push_back(nearest(q, qid, std::nullopt, p.distance_computations));
        p.votes.push_back(knn_weighted_vote(labeled(p.neighbors[0])));
        p.label = p.votes[0].label;
        break;
    }
    case ClassifierKind::KNN_M: {
        double global = kInfinity;
        for (std::size_t g = 0; g < feature_keys_.size(); ++g) {
            p.neighbors.push_back(nearest(q, qid, g, p.distance_computations));
            for (const auto& n : p.neighbors.back())
                global = std::min(global, n.distance);
        }
        for (const auto& nb : p.neighbors)
            p.votes.push_back(knn_weighted_vote(
                labeled(nb), spec_.vote_scope == VoteScope::Global ? std::optional(global) : std::nullopt));
        p.label = majority_vote(p.votes);
        break;
    }
    case ClassifierKind::DM_S:
    case ClassifierKind::DM_M:
        p.dm_row = dm_row(q, qid);
        p.distance_computations = p.dm_row.size();
        p.label = predict_backend(backend_, p.dm_row);
        break;
    }
    return p;
}

DistanceMatrix Classifier::distance_matrix(const std::vector<ProcessedSequence>& rows) const
{
    DistanceMatrix m;
    m.columns = columns_;
    if (m.columns.empty()) {
        // kNN models have no sampled columns; use every training sequence.
        for (std::size_t j = 0; j < train_.size(); ++j)
            if (spec_.is_multi())
                for (std::size_t g = 0; g < feature_keys_.size(); ++g)
                    m.columns.push_back({j, g});
            else
                m.columns.push_back({j, std::nullopt});
        std::stable_sort(m.columns.begin(), m.columns.end(),
                         [](const DmColumn& a, const DmColumn& b) { return a.group < b.group; });
    }
    m.values.resize(rows.size());
    parallel_for(rows.size(), options_.threads, [&](std::size_t i) {
        auto& row = m.values[i];
        for (const auto& c : m.columns)
            row.push_back(distance(rows[i], std::nullopt, c.train_index, c.group));
    });
    for (const auto& r : rows)
        m.row_labels.push_back(r.label);
    return m;
}

ProcessedSequence TrainedModel::process(const FrameSequence& seq) const
{
    if (seq.joint_count() != skeleton.size())
        throw InputError("sequence has " + std::to_string(seq.joint_count()) + " joints but the model skeleton has " +
                         std::to_string(skeleton.size()));
    const Normalizer norm(normalization, skeleton, lengths, at_rest_pose);
    return process_normalized(norm.apply(seq), feature_template, simplify_eps);
}

Prediction TrainedModel::classify(const FrameSequence& seq) const
{
    return classifier->predict(process(seq));
}

TrainedModel train_model(const LabeledDataset& train, const ClassifierSpec& spec, const FeatureTemplate& t,
                         const NormalizationSpec& normalization, const TrainOptions& options)
{
    train.validate();
    TrainedModel m;
    m.skeleton = train.skeleton;
    m.normalization = normalization;
    m.at_rest_pose = normalization.at_rest_pad ? train.at_rest_pose : std::nullopt;
    if (normalization.limbs.enabled)
        m.lengths = compute_standard_lengths(train);
    m.feature_template = t;
    m.simplify_eps = options.simplify_eps;

    const Normalizer norm(normalization, m.skeleton, m.lengths, m.at_rest_pose);
    std::vector<ProcessedSequence> processed(train.sequences.size());
    parallel_for(processed.size(), options.threads, [&](std::size_t i) {
        processed[i] = process_normalized(norm.apply(train.sequences[i]), t, options.simplify_eps);
    });
    Classifier::Options copt;
    copt.use_index = options.use_index;
    copt.threads = options.threads;
    m.classifier = std::make_shared<const Classifier>(spec, std::move(processed), feature_keys(t), copt);
    return m;
}

json to_json(const TrainedModel& model)
{
    const auto& c = *model.classifier;
    json training = json::array();
    for (const auto& t : c.training()) {
        json groups = json::array();
        for (const auto& g : t.groups)
            groups.push_back(trajectory_to_json(g));
        training.push_back({{"label", t.label}, {"groups", groups}, {"concat", trajectory_to_json(t.concat)}});
    }
    json out = {{"format", "subskel-model"},
                {"version", 1},
                {"skeleton", skeleton_to_json(model.skeleton, model.at_rest_pose)},
                {"normalization", to_json(model.normalization)},
                {"standard_lengths", to_json(model.lengths, model.skeleton)},
                {"feature_template", to_json(model.feature_template, model.skeleton)},
                {"simplify_eps", model.simplify_eps},
                {"classifier", to_json(c.spec())},
                {"training", training},
                {"metadata", model.metadata}};
    if (!c.spec().is_knn()) {
        json cols = json::array();
        for (const auto& col : c.columns())
            cols.push_back({{"train_index", col.train_index},
                            {"group", col.group ? json(*col.group) : json(nullptr)}});
        out["columns"] = cols;
        out["backend"] = to_json(c.backend());
    }
    return out;
}

TrainedModel model_from_json(const json& j)
{
    try {
        if (j.value("format", "") != "subskel-model")
            throw InputError("not a subskel model file");
        TrainedModel m;
        auto sk = skeleton_from_json(j.at("skeleton"));
        m.skeleton = std::move(sk.skeleton);
        m.at_rest_pose = std::move(sk.at_rest_pose);
        m.normalization = normalization_from_json(j.at("normalization"));
        m.lengths = standard_lengths_from_json(j.at("standard_lengths"), m.skeleton);
        m.feature_template = template_from_json(j.at("feature_template"), m.skeleton);
        m.simplify_eps = j.at("simplify_eps").get<double>();
        m.metadata = j.value("metadata", json::object());
        const auto spec = classifier_from_json(j.at("classifier"));
        std::vector<ProcessedSequence> train;
        for (const auto& t : j.at("training")) {
            ProcessedSequence p;
            p.label = t.at("label").get<std::string>();
            for (const auto& g : t.at("groups"))
                p.groups.push_back(trajectory_from_json(g));
            p.concat = trajectory_from_json(t.at("concat"));
            if (p.groups.size() != m.feature_template.feature_count())
                throw InputError("training entry has the wrong number of features");
            train.push_back(std::move(p));
        }
        std::vector<DmColumn> cols;
        BackendModel backend;
        if (!spec.is_knn()) {
            for (const auto& c : j.at("columns")) {
                DmColumn col{c.at("train_index").get<std::size_t>(), std::nullopt};
                if (!c.at("group").is_null())
                    col.group = c.at("group").get<std::size_t>();
                cols.push_back(col);
            }
            backend = backend_from_json(j.at("backend"));
        }
        m.classifier = std::make_shared<const Classifier>(spec, std::move(train), feature_keys(m.feature_template),
                                                          std::move(cols), std::move(backend));
        return m;
    } catch (const json::exception& e) {
        throw InputError(std::string("model file: ") + e.what());
    }
}

void save_model(const TrainedModel& model, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot write model file '" + path + "'");
    out << to_json(model).dump() << '\n';
}

TrainedModel load_model(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open model file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InputError("model file '" + path + "': " + e.what());
    }
    return model_from_json(j);
}

void write_distance_matrix_csv(std::ostream& out, const DistanceMatrix& m, const TrainedModel& model)
{
    const auto& train = model.classifier->training();
    const auto keys = feature_keys(model.feature_template);
    out << "row,label";
    for (const auto& c : m.columns) {
        std::string name = std::to_string(c.train_index) + ":" + train[c.train_index].label;
        if (c.group)
            name += ":" + keys[*c.group];
        out << ',' << csv_field(name);
    }
    out << '\n';
    for (std::size_t i = 0; i < m.values.size(); ++i) {
        out << i << ',' << csv_field(m.row_labels[i]);
        for (double v : m.values[i])
            out << ',' << format_double(v);
        out << '\n';
    }
}

} // namespace subskel
