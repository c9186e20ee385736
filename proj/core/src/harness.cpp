#include "subskel/harness.hpp"

#include "subskel/error.hpp"
#include "subskel/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ostream>

namespace subskel {

std::string format_number(double v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

std::string evidence_of(const Prediction& p)
{
    std::string out;
    if (!p.neighbors.empty()) {
        for (std::size_t g = 0; g < p.neighbors.size(); ++g) {
            if (g)
                out += "; ";
            for (std::size_t i = 0; i < p.neighbors[g].size(); ++i) {
                const auto& n = p.neighbors[g][i];
                out += (i ? " " : "") + std::to_string(n.train_index) + ":" + n.label + "(" +
                       format_number(n.distance) + ")";
            }
        }
    } else if (!p.dm_row.empty()) {
        const auto it = std::min_element(p.dm_row.begin(), p.dm_row.end());
        out = "min-column " + std::to_string(it - p.dm_row.begin()) + "(" + format_number(*it) + ")";
    }
    return out;
}

} // namespace

double percentile(std::vector<double> values, double q)
{
    if (values.empty())
        return 0.0;
    std::sort(values.begin(), values.end());
    const auto rank = static_cast<std::size_t>(std::ceil(q / 100.0 * double(values.size())));
    return values[std::clamp<std::size_t>(rank, 1, values.size()) - 1];
}

Report evaluate_model(const TrainedModel& model, const LabeledDataset& test, std::size_t threads)
{
    if (test.sequences.empty())
        throw InputError("evaluation needs at least one test sequence");
    Report r;
    r.predictions.resize(test.sequences.size());
    parallel_for(test.sequences.size(), threads, [&](std::size_t i) {
        const auto start = std::chrono::steady_clock::now();
        const auto p = model.classify(test.sequences[i]);
        const auto stop = std::chrono::steady_clock::now();
        auto& row = r.predictions[i];
        row.index = i;
        row.truth = test.sequences[i].label();
        row.predicted = p.label;
        row.evidence = evidence_of(p);
        row.distance_computations = p.distance_computations;
        row.latency_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    });

    std::map<std::string, ClassAccuracy> classes;
    std::size_t hits = 0, computations = 0;
    std::vector<double> latencies;
    for (const auto& p : r.predictions) {
        auto& c = classes[p.truth];
        c.label = p.truth;
        ++c.total;
        c.correct += p.truth == p.predicted;
        hits += p.truth == p.predicted;
        ++r.confusion[{p.truth, p.predicted}];
        computations += p.distance_computations;
        latencies.push_back(p.latency_ms);
    }
    const double n = double(r.predictions.size());
    r.accuracy = double(hits) / n;
    r.mean_distance_computations = double(computations) / n;
    for (auto& [label, c] : classes)
        r.per_class.push_back(c);
    double sum = 0.0;
    for (double l : latencies)
        sum += l;
    r.latency = {sum / n, percentile(latencies, 50), percentile(latencies, 90), percentile(latencies, 99)};
    return r;
}

void write_report_text(std::ostream& out, const Report& r, bool include_latency)
{
    for (const auto& [k, v] : r.header)
        out << "# " << k << ": " << v << '\n';
    out << "queries: " << r.predictions.size() << '\n';
    out << "accuracy: " << format_number(r.accuracy) << '\n';
    out << "mean distance computations per query: " << format_number(r.mean_distance_computations) << '\n';
    if (include_latency)
        out << "latency ms (non-deterministic): mean " << format_number(r.latency.mean) << ", p50 "
            << format_number(r.latency.p50) << ", p90 " << format_number(r.latency.p90) << ", p99 "
            << format_number(r.latency.p99) << '\n';
    out << "per-class accuracy:\n";
    for (const auto& c : r.per_class)
        out << "  " << c.label << ": " << c.correct << "/" << c.total << '\n';
    out << "confusion (true -> predicted: count):\n";
    for (const auto& [key, count] : r.confusion)
        out << "  " << key.first << " -> " << key.second << ": " << count << '\n';
}

void write_report_csv(std::ostream& out, const Report& r, bool include_latency)
{
    out << "section,key,value\n";
    for (const auto& [k, v] : r.header)
        out << "header," << csv_field(k) << ',' << csv_field(v) << '\n';
    out << "summary,queries," << r.predictions.size() << '\n';
    out << "summary,accuracy," << format_number(r.accuracy) << '\n';
    out << "summary,mean_distance_computations," << format_number(r.mean_distance_computations) << '\n';
    if (include_latency) {
        out << "latency,mean_ms," << format_number(r.latency.mean) << '\n';
        out << "latency,p50_ms," << format_number(r.latency.p50) << '\n';
        out << "latency,p90_ms," << format_number(r.latency.p90) << '\n';
        out << "latency,p99_ms," << format_number(r.latency.p99) << '\n';
    }
    for (const auto& c : r.per_class)
        out << "class_accuracy," << csv_field(c.label) << ',' << format_number(double(c.correct) / double(c.total))
            << '\n';
    for (const auto& [key, count] : r.confusion)
        out << "confusion," << csv_field(key.first + "->" + key.second) << ',' << count << '\n';
}

void write_predictions_csv(std::ostream& out, const Report& r, bool include_stats)
{
    out << "index,true_label,predicted_label,evidence" << (include_stats ? ",distance_computations" : "") << '\n';
    for (const auto& p : r.predictions) {
        out << p.index << ',' << csv_field(p.truth) << ',' << csv_field(p.predicted) << ',' << csv_field(p.evidence);
        if (include_stats)
            out << ',' << p.distance_computations;
        out << '\n';
    }
}

} // namespace subskel
