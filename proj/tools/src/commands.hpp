#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace subskel::cli {

struct Globals {
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    double simplify_eps = 0.0;
};

struct GenArgs {
    std::string skeleton, out, skeleton_out;
    std::size_t classes = 4, per_class = 10, subjects = 4;
    double frames_mean = 40, frames_sd = 0, fps = 30;
    double noise = 0, jitter = 0, translation = 0, amplitude = 0.5;
    std::vector<std::string> discriminative;
    std::vector<std::string> wobble;
    double wobble_amplitude = 0.5;
    std::string assignment = "factorial";
    std::size_t repetitions = 0;
    double repetition_jitter = 0.2;
};

/// Template search options shared by mine and evaluate.
struct SearchArgs {
    std::string classifier = "1nn-s";
    std::string measure = "cf";
    double cf_tolerance = 1e-6;
    std::string norm_sweep;
    bool merge = false;
    std::string reference_scope = "auto";
    std::optional<std::size_t> max_size;
    double inner_fraction = 1.0 / 3.0;
};

struct MineArgs {
    std::string data, skeleton, out;
    SearchArgs search;
};

struct EvaluateArgs {
    std::string data, skeleton, split = "fraction:0.5", model;
    SearchArgs search;
    std::string out, csv, predictions;
    bool no_latency = false;
    bool use_index = true;
};

struct ClassifyArgs {
    std::string model, data, out;
    bool stats = false;
};

struct SegmentArgs {
    std::string data, out, report;
    std::size_t window = 5;
    double search_fraction = 0.8;
    std::optional<std::size_t> repetitions;
};

struct DistancesArgs {
    std::string p, q, measure = "cf";
    double cf_tolerance = 1e-6;
};

struct ExportDmArgs {
    std::string model, data, out;
};

int run_gen(const Globals& g, const GenArgs& a);
int run_mine(const Globals& g, const MineArgs& a);
int run_evaluate(const Globals& g, const EvaluateArgs& a);
int run_classify(const Globals& g, const ClassifyArgs& a);
int run_segment(const Globals& g, const SegmentArgs& a);
int run_distances(const Globals& g, const DistancesArgs& a);
int run_export_dm(const Globals& g, const ExportDmArgs& a);

} // namespace subskel::cli
