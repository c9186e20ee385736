#include "commands.hpp"

#include <subskel/error.hpp>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <functional>
#include <iostream>

using namespace subskel::cli;

namespace {

void add_search_options(CLI::App* cmd, SearchArgs& s)
{
    cmd->add_option("--classifier", s.classifier, "kNN-s/kNN-m/DM-s/DM-m spec, e.g. 1nn-s, 3nn-m, dm-s:cols=1")
        ->capture_default_str();
    cmd->add_option("--measure", s.measure, "cf, df or dtw")->capture_default_str();
    cmd->add_option("--cf-tolerance", s.cf_tolerance, "relative tolerance of the CF value search")
        ->capture_default_str();
    cmd->add_option("--norm-sweep", s.norm_sweep, "JSON array of normalization specs tried in turn");
    cmd->add_flag("--merge", s.merge, "merge degree-2 chains into canonical sets");
    cmd->add_option("--ref-scope", s.reference_scope, "reference joints: all, central or auto")->capture_default_str();
    cmd->add_option("--max-size", s.max_size, "upper bound on the number of chosen sets");
    cmd->add_option("--inner-train-fraction", s.inner_fraction, "share of each class in the inner training part")
        ->capture_default_str();
}

} // namespace

int main(int argc, char** argv)
{
    auto logger = spdlog::stderr_color_mt("subskel");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);

    CLI::App app{"Sub-skeleton trajectory mining and classification"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    bool verbose = false;
    app.add_option("--seed", g.seed, "seed for every random choice in the run")->capture_default_str();
    app.add_option("--threads", g.threads, "worker threads (0 = all cores)")->capture_default_str();
    app.add_option("--simplify-eps", g.simplify_eps, "trajectory simplification bound for training (0 = off)")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    app.add_flag("-v,--verbose", verbose, "log progress to stderr");

    std::function<int()> action;

    GenArgs gen;
    auto* c_gen = app.add_subcommand("gen", "generate a synthetic labeled dataset");
    c_gen->add_option("--skeleton", gen.skeleton, "skeleton JSON")->required();
    c_gen->add_option("--out", gen.out, "output JSONL")->required();
    c_gen->add_option("--skeleton-out", gen.skeleton_out, "write the skeleton with the rest pose used");
    c_gen->add_option("--classes", gen.classes)->capture_default_str();
    c_gen->add_option("--per-class", gen.per_class, "sequences (or recordings) per class")->capture_default_str();
    c_gen->add_option("--subjects", gen.subjects)->capture_default_str();
    c_gen->add_option("--frames-mean", gen.frames_mean)->capture_default_str();
    c_gen->add_option("--frames-sd", gen.frames_sd)->capture_default_str();
    c_gen->add_option("--fps", gen.fps)->capture_default_str();
    c_gen->add_option("--noise", gen.noise, "per-coordinate Gaussian noise SD")->capture_default_str();
    c_gen->add_option("--jitter", gen.jitter, "time-warp speed jitter in [0, 1)")->capture_default_str();
    c_gen->add_option("--translation", gen.translation, "per-sequence offset SD")->capture_default_str();
    c_gen->add_option("--amplitude", gen.amplitude, "class motion amplitude")->capture_default_str();
    c_gen->add_option("--discriminative", gen.discriminative, "joint[@reference][:levels], repeatable")->required();
    c_gen->add_option("--wobble", gen.wobble, "joints with class-independent motion; 'rest' = all others");
    c_gen->add_option("--wobble-amplitude", gen.wobble_amplitude)->capture_default_str();
    c_gen->add_option("--assignment", gen.assignment, "factorial or redundant")->capture_default_str();
    c_gen->add_option("--repetitions", gen.repetitions, "write raw recordings of this many repetitions instead");
    c_gen->add_option("--repetition-jitter", gen.repetition_jitter)->capture_default_str();
    c_gen->callback([&] { action = [&] { return run_gen(g, gen); }; });

    MineArgs mine;
    auto* c_mine = app.add_subcommand("mine", "mine a feature template and write a trained model");
    c_mine->add_option("--data", mine.data, "training JSONL")->required();
    c_mine->add_option("--skeleton", mine.skeleton, "skeleton JSON")->required();
    c_mine->add_option("--out", mine.out, "model JSON")->required();
    add_search_options(c_mine, mine.search);
    c_mine->callback([&] { action = [&] { return run_mine(g, mine); }; });

    EvaluateArgs eval;
    auto* c_eval = app.add_subcommand("evaluate", "split, mine (or reuse a model's template), train and test");
    c_eval->add_option("--data", eval.data, "dataset JSONL")->required();
    c_eval->add_option("--skeleton", eval.skeleton, "skeleton JSON")->required();
    c_eval->add_option("--split", eval.split, "count:n, fraction:f, subjects:a,b or kfold:k:i")->capture_default_str();
    c_eval->add_option("--model", eval.model, "reuse this model's template, normalization and classifier");
    add_search_options(c_eval, eval.search);
    c_eval->add_option("--out", eval.out, "text report (default: stdout)");
    c_eval->add_option("--csv", eval.csv, "CSV report");
    c_eval->add_option("--predictions", eval.predictions, "per-query predictions CSV");
    c_eval->add_flag("--no-latency", eval.no_latency, "leave wall-clock figures out of the reports");
    c_eval->add_flag("!--no-index", eval.use_index, "answer kNN queries by linear scan");
    c_eval->callback([&] { action = [&] { return run_evaluate(g, eval); }; });

    ClassifyArgs cls;
    auto* c_cls = app.add_subcommand("classify", "classify sequences with a trained model");
    c_cls->add_option("--model", cls.model, "model JSON")->required();
    c_cls->add_option("--data", cls.data, "query JSONL")->required();
    c_cls->add_option("--out", cls.out, "predictions CSV")->required();
    c_cls->add_flag("--stats", cls.stats, "report distance computations per query");
    c_cls->callback([&] { action = [&] { return run_classify(g, cls); }; });

    SegmentArgs seg;
    auto* c_seg = app.add_subcommand("segment", "cut repeated performances into single repetitions");
    c_seg->add_option("--data", seg.data, "raw recordings JSONL")->required();
    c_seg->add_option("--out", seg.out, "segmented JSONL")->required();
    c_seg->add_option("--report", seg.report, "per-class segment counts CSV");
    c_seg->add_option("--window", seg.window, "odd smoothing window")->capture_default_str();
    c_seg->add_option("--search-fraction", seg.search_fraction, "cut search window as a fraction of the period")
        ->capture_default_str();
    c_seg->add_option("--repetitions", seg.repetitions, "skip estimation and cut into this many segments");
    c_seg->callback([&] { action = [&] { return run_segment(g, seg); }; });

    DistancesArgs dist;
    auto* c_dist = app.add_subcommand("distances", "distance between two trajectories given as JSON arrays");
    c_dist->add_option("p", dist.p, "first trajectory file")->required();
    c_dist->add_option("q", dist.q, "second trajectory file")->required();
    c_dist->add_option("--measure", dist.measure, "cf, df or dtw")->capture_default_str();
    c_dist->add_option("--cf-tolerance", dist.cf_tolerance)->capture_default_str();
    c_dist->callback([&] { action = [&] { return run_distances(g, dist); }; });

    ExportDmArgs dm;
    auto* c_dm = app.add_subcommand("export-dm", "write the query-by-training distance matrix");
    c_dm->add_option("--model", dm.model, "model JSON")->required();
    c_dm->add_option("--data", dm.data, "row sequences JSONL")->required();
    c_dm->add_option("--out", dm.out, "matrix CSV")->required();
    c_dm->callback([&] { action = [&] { return run_export_dm(g, dm); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    if (verbose)
        spdlog::set_level(spdlog::level::info);
    try {
        return action();
    } catch (const subskel::InputError& e) {
        spdlog::error("input error: {}", e.what());
        return 2;
    } catch (const subskel::ConfigError& e) {
        spdlog::error("configuration error: {}", e.what());
        return 3;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
}
