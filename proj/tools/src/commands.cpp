#include "commands.hpp"

#include <subskel/dataset_io.hpp>
#include <subskel/error.hpp>
#include <subskel/harness.hpp>
#include <subskel/mining.hpp>
#include <subskel/parallel.hpp>
#include <subskel/random.hpp>
#include <subskel/segment.hpp>
#include <subskel/split.hpp>
#include <subskel/synthetic.hpp>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

namespace subskel::cli {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot write '" + path + "'");
    return out;
}

json read_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot read '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

std::size_t parse_count(const std::string& text, const std::string& what)
{
    std::size_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw ConfigError("bad " + what + " '" + text + "'");
    return v;
}

// joint[@reference][:levels]
DiscriminativeJoint parse_discriminative(const std::string& text, const Skeleton& sk)
{
    std::string body = text;
    DiscriminativeJoint d;
    if (const auto colon = body.rfind(':'); colon != std::string::npos) {
        d.levels = parse_count(body.substr(colon + 1), "level count");
        body.resize(colon);
    }
    const auto at = body.find('@');
    const auto joint = sk.find(body.substr(0, at));
    if (!joint)
        throw ConfigError("unknown joint in '" + text + "'");
    d.joint = *joint;
    if (at != std::string::npos) {
        d.reference = sk.find(body.substr(at + 1));
        if (!d.reference)
            throw ConfigError("unknown reference joint in '" + text + "'");
    }
    return d;
}

LevelAssignment parse_assignment(const std::string& text)
{
    if (text == "factorial")
        return LevelAssignment::Factorial;
    if (text == "redundant")
        return LevelAssignment::Redundant;
    throw ConfigError("unknown level assignment '" + text + "' (expected factorial or redundant)");
}

ClassifierSpec classifier_of(const SearchArgs& s, std::uint64_t seed)
{
    auto spec = parse_classifier(s.classifier);
    spec.measure = {parse_measure(s.measure), s.cf_tolerance};
    if (!(s.cf_tolerance > 0))
        throw ConfigError("--cf-tolerance must be positive");
    spec.seed = seed;
    return spec;
}

std::vector<NormalizationSpec> normalizations_of(const SearchArgs& s)
{
    if (s.norm_sweep.empty())
        return {NormalizationSpec{}};
    const auto j = read_json(s.norm_sweep);
    if (!j.is_array() || j.empty())
        throw ConfigError(s.norm_sweep + ": expected a non-empty JSON array of normalization specs");
    std::vector<NormalizationSpec> out;
    for (const auto& n : j)
        out.push_back(normalization_from_json(n));
    return out;
}

MiningConfig mining_config(const Globals& g, const SearchArgs& s, const Skeleton& sk)
{
    MiningConfig cfg;
    cfg.candidates = canonical_subskeletons(sk, s.merge, parse_reference_scope(s.reference_scope));
    cfg.classifier = classifier_of(s, g.seed);
    cfg.normalizations = normalizations_of(s);
    cfg.split_seed = g.seed;
    cfg.max_template_size = s.max_size;
    cfg.inner_train_fraction = s.inner_fraction;
    cfg.simplify_eps = g.simplify_eps;
    cfg.threads = g.threads;
    return cfg;
}

std::string trace_text(const std::vector<TraceEntry>& trace)
{
    std::string out;
    for (const auto& t : trace)
        out += (out.empty() ? "" : ", ") + t.name + " -> " + format_number(t.accuracy);
    return out.empty() ? "(empty)" : out;
}

} // namespace

int run_gen(const Globals& g, const GenArgs& a)
{
    const auto file = read_skeleton_file(a.skeleton);
    SyntheticSpec spec;
    spec.skeleton = file.skeleton;
    spec.rest_pose = file.at_rest_pose ? *file.at_rest_pose : default_rest_pose(file.skeleton, g.seed);
    spec.classes = a.classes;
    spec.sequences_per_class = a.per_class;
    spec.subjects = a.subjects;
    spec.frames_mean = a.frames_mean;
    spec.frames_sd = a.frames_sd;
    spec.fps = a.fps;
    spec.noise_sd = a.noise;
    spec.speed_jitter = a.jitter;
    spec.translation_sd = a.translation;
    spec.motion_amplitude = a.amplitude;
    spec.wobble_amplitude = a.wobble_amplitude;
    spec.assignment = parse_assignment(a.assignment);
    spec.seed = g.seed;
    for (const auto& d : a.discriminative)
        spec.discriminative.push_back(parse_discriminative(d, spec.skeleton));
    std::set<JointIndex> wobble;
    for (const auto& w : a.wobble) {
        if (w == "rest") {
            for (JointIndex j = 0; j < spec.skeleton.size(); ++j)
                wobble.insert(j);
            for (const auto& d : spec.discriminative)
                wobble.erase(d.joint);
        } else if (const auto j = spec.skeleton.find(w)) {
            wobble.insert(*j);
        } else {
            throw ConfigError("unknown wobble joint '" + w + "'");
        }
    }
    spec.wobble_joints.assign(wobble.begin(), wobble.end());

    std::vector<FrameSequence> out;
    if (a.repetitions > 0) {
        for (std::size_t c = 0; c < spec.classes; ++c)
            for (std::size_t i = 0; i < spec.sequences_per_class; ++i)
                out.push_back(generate_repetitions(spec, c, a.repetitions, a.repetition_jitter, i));
    } else {
        out = generate(spec).sequences;
    }
    write_sequences_file(a.out, out);
    if (!a.skeleton_out.empty())
        write_skeleton_file(a.skeleton_out, spec.skeleton, spec.rest_pose);
    std::cout << "wrote " << out.size() << " sequences to " << a.out << '\n';
    return 0;
}

int run_mine(const Globals& g, const MineArgs& a)
{
    const auto ds = load_dataset(a.data, a.skeleton);
    const auto cfg = mining_config(g, a.search, ds.skeleton);
    const auto result = mine(ds, cfg);

    TrainOptions opt;
    opt.simplify_eps = g.simplify_eps;
    opt.threads = g.threads;
    auto model = train_model(ds, result.classifier, result.feature_template, result.normalization, opt);
    model.metadata = {{"seed", g.seed}, {"mining", to_json(result, ds.skeleton)}};
    save_model(model, a.out);

    std::cout << "normalization: " << result.normalization.describe() << '\n'
              << "template: " << result.feature_template.describe() << '\n'
              << "trace: " << trace_text(result.trace) << '\n'
              << "inner accuracy: " << format_number(result.accuracy) << '\n';
    return 0;
}

int run_evaluate(const Globals& g, const EvaluateArgs& a)
{
    const auto ds = load_dataset(a.data, a.skeleton);
    const auto split_spec = parse_split_spec(a.split);
    const auto split = split_train_test(ds, split_spec, g.seed);
    if (split.train.sequences.empty() || split.test.sequences.empty())
        throw ConfigError("split '" + a.split + "' leaves an empty train or test part");

    Report report;
    auto& h = report.header;
    h.emplace_back("seed", std::to_string(g.seed));
    h.emplace_back("split", to_string(split_spec));
    h.emplace_back("train sequences", std::to_string(split.train.sequences.size()));
    h.emplace_back("test sequences", std::to_string(split.test.sequences.size()));
    h.emplace_back("simplify eps", format_number(g.simplify_eps));

    FeatureTemplate t;
    NormalizationSpec norm;
    ClassifierSpec spec;
    if (!a.model.empty()) {
        const auto source = load_model(a.model);
        if (!(source.skeleton == ds.skeleton))
            throw ConfigError("model skeleton differs from the dataset skeleton");
        t = source.feature_template;
        norm = source.normalization;
        spec = source.classifier->spec();
        h.emplace_back("template source", a.model);
    } else {
        const auto result = mine(split.train, mining_config(g, a.search, ds.skeleton));
        t = result.feature_template;
        norm = result.normalization;
        spec = result.classifier;
        h.emplace_back("mining trace", trace_text(result.trace));
        h.emplace_back("mining inner accuracy", format_number(result.accuracy));
    }
    h.emplace_back("classifier", to_string(spec));
    h.emplace_back("measure", to_string(spec.measure.kind));
    h.emplace_back("normalization", norm.describe());
    h.emplace_back("template", t.describe());

    TrainOptions opt;
    opt.simplify_eps = g.simplify_eps;
    opt.threads = g.threads;
    opt.use_index = a.use_index;
    const auto model = train_model(split.train, spec, t, norm, opt);
    auto header = std::move(report.header);
    report = evaluate_model(model, split.test, g.threads);
    report.header = std::move(header);

    const bool latency = !a.no_latency;
    if (a.out.empty()) {
        write_report_text(std::cout, report, latency);
    } else {
        auto out = open_out(a.out);
        write_report_text(out, report, latency);
    }
    if (!a.csv.empty()) {
        auto out = open_out(a.csv);
        write_report_csv(out, report, latency);
    }
    if (!a.predictions.empty()) {
        auto out = open_out(a.predictions);
        write_predictions_csv(out, report, true);
    }
    return 0;
}

int run_classify(const Globals& g, const ClassifyArgs& a)
{
    const auto model = load_model(a.model);
    LabeledDataset queries{model.skeleton, read_sequences_file(a.data), std::nullopt};
    queries.validate();
    const auto report = evaluate_model(model, queries, g.threads);
    auto out = open_out(a.out);
    write_predictions_csv(out, report, a.stats);
    std::cout << "classified " << report.predictions.size() << " sequences\n";
    if (a.stats)
        std::cout << "mean distance computations per query: " << format_number(report.mean_distance_computations)
                  << '\n';
    return 0;
}

int run_segment(const Globals& g, const SegmentArgs& a)
{
    SegmentationSpec spec{a.window, a.search_fraction};
    validate(spec);
    const auto recordings = read_sequences_file(a.data);
    std::vector<Segmentation> cuts(recordings.size());
    parallel_for(recordings.size(), g.threads, [&](std::size_t i) {
        const auto r = a.repetitions ? *a.repetitions
                                     : estimate_repetitions(to_signal(recordings[i]), spec).repetitions;
        cuts[i] = cut_segments(recordings[i], r, spec);
    });

    std::vector<FrameSequence> segments;
    std::map<std::string, std::pair<std::size_t, std::size_t>> counts;
    for (std::size_t i = 0; i < recordings.size(); ++i) {
        if (cuts[i].uniform_fallback)
            spdlog::warn("recording {}: cut windows collided; used uniform cuts", i);
        auto& c = counts[recordings[i].label()];
        ++c.first;
        c.second += cuts[i].segments.size();
        segments.insert(segments.end(), cuts[i].segments.begin(), cuts[i].segments.end());
    }
    write_sequences_file(a.out, segments);
    if (!a.report.empty()) {
        auto out = open_out(a.report);
        out << "label,recordings,segments\n";
        for (const auto& [label, c] : counts)
            out << label << ',' << c.first << ',' << c.second << '\n';
    }
    std::cout << "wrote " << segments.size() << " segments from " << recordings.size() << " recordings\n";
    return 0;
}

int run_distances(const Globals&, const DistancesArgs& a)
{
    const auto p = trajectory_from_json(read_json(a.p));
    const auto q = trajectory_from_json(read_json(a.q));
    if (!(a.cf_tolerance > 0))
        throw ConfigError("--cf-tolerance must be positive");
    const double d = compute_distance({parse_measure(a.measure), a.cf_tolerance}, p, q);
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, d);
    std::cout << std::string(buf, res.ptr) << '\n';
    return 0;
}

int run_export_dm(const Globals&, const ExportDmArgs& a)
{
    const auto model = load_model(a.model);
    LabeledDataset rows{model.skeleton, read_sequences_file(a.data), std::nullopt};
    rows.validate();
    std::vector<ProcessedSequence> processed;
    for (const auto& s : rows.sequences)
        processed.push_back(model.process(s));
    auto out = open_out(a.out);
    write_distance_matrix_csv(out, model.classifier->distance_matrix(processed), model);
    return 0;
}

} // namespace subskel::cli
