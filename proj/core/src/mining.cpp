#include "subskel/mining.hpp"

#include "subskel/error.hpp"
#include "subskel/parallel.hpp"
#include "subskel/simplify.hpp"
#include "subskel/split.hpp"

#include <spdlog/spdlog.h>

#include <map>
#include <mutex>

namespace subskel {

using nlohmann::json;

namespace {

// Feature trajectories per group key for a fixed set of normalized
// sequences, computed on first use.
class FeatureStore {
public:
    FeatureStore(std::vector<FrameSequence> normalized, double eps) : seqs_(std::move(normalized)), eps_(eps) {}

    std::vector<ProcessedSequence> processed(const FeatureTemplate& t, bool need_concat)
    {
        std::vector<const std::vector<Trajectory>*> raw;
        std::vector<const std::vector<Trajectory>*> simplified;
        for (const auto& g : t.groups()) {
            const auto& entry = group(g);
            raw.push_back(&entry.raw);
            simplified.push_back(&entry.simplified);
        }
        std::vector<ProcessedSequence> out(seqs_.size());
        for (std::size_t i = 0; i < seqs_.size(); ++i) {
            out[i].label = seqs_[i].label();
            for (auto* s : simplified)
                out[i].groups.push_back((*s)[i]);
            if (need_concat) {
                std::vector<FeatureTrajectory> parts;
                for (auto* r : raw)
                    parts.push_back({"", (*r)[i]});
                out[i].concat = concat_features(parts);
                if (eps_ > 0.0)
                    out[i].concat = simplify(out[i].concat, {eps_});
            }
        }
        return out;
    }

private:
    struct Entry {
        std::vector<Trajectory> raw, simplified;
    };

    const Entry& group(const FeatureGroup& g)
    {
        const auto key = g.key();
        {
            std::lock_guard lock(mutex_);
            if (auto it = groups_.find(key); it != groups_.end())
                return it->second;
        }
        FeatureTemplate single;
        single = adapted_union(single, {key, g.reference, g.singletons});
        Entry e;
        for (const auto& s : seqs_) {
            auto t = std::move(extract_feature_trajectories(s, single).front().trajectory);
            e.simplified.push_back(eps_ > 0.0 ? simplify(t, {eps_}) : t);
            e.raw.push_back(std::move(t));
        }
        std::lock_guard lock(mutex_);
        return groups_.emplace(key, std::move(e)).first->second;
    }

    std::vector<FrameSequence> seqs_;
    double eps_;
    std::mutex mutex_;
    std::map<std::string, Entry> groups_;
};

struct Evaluator {
    const ClassifierSpec& spec;
    FeatureStore& store;
    DistanceCache& cache;
    const std::vector<std::size_t>& dr;
    const std::vector<std::size_t>& dt;

    double accuracy(const FeatureTemplate& t) const
    {
        const bool concat = !spec.is_multi();
        const auto all = store.processed(t, concat);
        std::vector<ProcessedSequence> train;
        for (auto i : dr)
            train.push_back(all[i]);
        Classifier::Options opt;
        opt.cache = &cache;
        opt.train_ids = dr;
        opt.use_index = false;
        const Classifier c(spec, std::move(train), feature_keys(t), opt);
        std::size_t hits = 0;
        for (auto i : dt)
            hits += c.predict(all[i], i).label == all[i].label;
        return dt.empty() ? 1.0 : double(hits) / double(dt.size());
    }
};

SweepOutcome greedy(const LabeledDataset& train, const MiningConfig& cfg, const NormalizationSpec& norm,
                    const std::vector<std::size_t>& dr, const std::vector<std::size_t>& dt)
{
    SweepOutcome out;
    out.normalization = norm;
    LabeledDataset inner_train{train.skeleton, {}, train.at_rest_pose};
    for (auto i : dr)
        inner_train.sequences.push_back(train.sequences[i]);
    if (norm.limbs.enabled)
        out.lengths = compute_standard_lengths(inner_train);
    const Normalizer normalizer(norm, train.skeleton, out.lengths,
                                norm.at_rest_pad ? train.at_rest_pose : std::nullopt);
    std::vector<FrameSequence> normalized(train.sequences.size());
    parallel_for(normalized.size(), cfg.threads, [&](std::size_t i) { normalized[i] = normalizer.apply(train.sequences[i]); });

    FeatureStore store(std::move(normalized), cfg.simplify_eps);
    DistanceCache cache(cfg.classifier.measure);
    const Evaluator eval{cfg.classifier, store, cache, dr, dt};

    const std::size_t cap = cfg.max_template_size.value_or(cfg.candidates.size());
    std::vector<bool> used(cfg.candidates.size(), false);
    while (out.feature_template.chosen().size() < cap) {
        std::vector<double> acc(cfg.candidates.size(), -1.0);
        parallel_for(cfg.candidates.size(), cfg.threads, [&](std::size_t c) {
            if (!used[c] && !out.feature_template.contains(cfg.candidates[c]))
                acc[c] = eval.accuracy(adapted_union(out.feature_template, cfg.candidates[c]));
        });
        std::size_t best = 0;
        for (std::size_t c = 1; c < acc.size(); ++c)
            if (acc[c] > acc[best])
                best = c;
        if (!(acc[best] > out.accuracy))
            break;
        std::size_t tied = 0;
        for (std::size_t c = 0; c < acc.size(); ++c)
            tied += c != best && acc[c] == acc[best];
        used[best] = true;
        out.feature_template = adapted_union(out.feature_template, cfg.candidates[best]);
        out.accuracy = acc[best];
        out.trace.push_back({best, cfg.candidates[best].name, acc[best], tied});
        spdlog::debug("[{}] added {} -> {:.4f}", norm.describe(), cfg.candidates[best].name, acc[best]);
    }
    return out;
}

void check_classes(const LabeledDataset& train)
{
    std::map<std::string, std::size_t> counts;
    for (const auto& s : train.sequences)
        ++counts[s.label()];
    if (counts.size() < 2)
        throw ConfigError("mining needs at least two classes");
    for (const auto& [label, n] : counts)
        if (n < 2)
            throw ConfigError("class '" + label + "' has fewer than two training sequences");
}

} // namespace

MiningResult mine(const LabeledDataset& train, const MiningConfig& cfg)
{
    train.validate();
    check_classes(train);
    if (cfg.candidates.empty())
        throw ConfigError("mining needs at least one candidate set");
    if (cfg.normalizations.empty())
        throw ConfigError("mining needs at least one normalization setting");
    if (!(cfg.inner_train_fraction > 0.0 && cfg.inner_train_fraction < 1.0))
        throw ConfigError("inner training fraction must be in (0, 1)");
    for (const auto& n : cfg.normalizations)
        validate(n, train.skeleton, train.at_rest_pose.has_value());

    const auto split = split_train_test(train, FractionPerClass{cfg.inner_train_fraction}, cfg.split_seed);
    MiningResult result;
    result.classifier = cfg.classifier;
    result.inner_train = split.train_indices;
    result.inner_test = split.test_indices;
    {
        std::map<std::string, bool> present;
        for (auto i : split.train_indices)
            present[train.sequences[i].label()] = true;
        for (const auto& l : train.labels())
            if (!present.count(l))
                throw ConfigError("class '" + l + "' is missing from the inner training part");
    }
    spdlog::info("mining: {} candidates, inner split {}/{}, seed {}", cfg.candidates.size(),
                 split.train_indices.size(), split.test_indices.size(), cfg.split_seed);

    std::size_t best = 0;
    for (std::size_t k = 0; k < cfg.normalizations.size(); ++k) {
        result.sweep.push_back(greedy(train, cfg, cfg.normalizations[k], split.train_indices, split.test_indices));
        const auto& cur = result.sweep.back();
        const auto& top = result.sweep[best];
        if (cur.accuracy > top.accuracy ||
            (cur.accuracy == top.accuracy && cur.feature_template.chosen().size() < top.feature_template.chosen().size()))
            best = k;
    }
    const auto& win = result.sweep[best];
    result.feature_template = win.feature_template;
    result.normalization = win.normalization;
    result.trace = win.trace;
    result.accuracy = win.accuracy;
    if (result.feature_template.empty())
        throw ConfigError("no candidate reached a positive inner accuracy");
    return result;
}

double inner_accuracy(const FeatureTemplate& t, const LabeledDataset& dr, const LabeledDataset& dt,
                      const ClassifierSpec& classifier, const NormalizationSpec& normalization, double simplify_eps)
{
    TrainOptions opt;
    opt.simplify_eps = simplify_eps;
    opt.use_index = false;
    const auto model = train_model(dr, classifier, t, normalization, opt);
    if (dt.sequences.empty())
        return 1.0;
    std::size_t hits = 0;
    for (const auto& s : dt.sequences)
        hits += model.classify(s).label == s.label();
    return double(hits) / double(dt.sequences.size());
}

json to_json(const MiningResult& r, const Skeleton& skeleton)
{
    auto trace_json = [](const std::vector<TraceEntry>& trace) {
        json out = json::array();
        for (const auto& e : trace)
            out.push_back({{"candidate", e.candidate}, {"name", e.name}, {"accuracy", e.accuracy}, {"tied", e.tied}});
        return out;
    };
    json sweep = json::array();
    for (const auto& s : r.sweep)
        sweep.push_back({{"normalization", s.normalization.describe()},
                         {"accuracy", s.accuracy},
                         {"template", s.feature_template.describe()},
                         {"trace", trace_json(s.trace)}});
    return {{"template", to_json(r.feature_template, skeleton)},
            {"normalization", to_json(r.normalization)},
            {"classifier", to_json(r.classifier)},
            {"inner_accuracy", r.accuracy},
            {"trace", trace_json(r.trace)},
            {"sweep", sweep},
            {"inner_train_size", r.inner_train.size()},
            {"inner_test_size", r.inner_test.size()}};
}

} // namespace subskel
