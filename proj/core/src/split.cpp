#include "subskel/split.hpp"

#include "subskel/error.hpp"
#include "subskel/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace subskel {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<std::string> split_on(const std::string& text, char sep)
{
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(text);
    while (std::getline(in, part, sep))
        parts.push_back(part);
    return parts;
}

double parse_double(const std::string& s, const std::string& what)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size())
            throw ConfigError("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid " + what + " '" + s + "'");
    }
}

std::size_t parse_count(const std::string& s, const std::string& what)
{
    const double v = parse_double(s, what);
    if (v < 0 || v != std::floor(v))
        throw ConfigError("invalid " + what + " '" + s + "'");
    return static_cast<std::size_t>(v);
}

} // namespace

SplitSpec parse_split_spec(const std::string& text)
{
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (kind == "count") {
        const auto n = parse_count(rest, "training count");
        if (n == 0)
            throw ConfigError("training count must be positive");
        return FixedCountPerClass{n};
    }
    if (kind == "fraction") {
        const double p = parse_double(rest, "training fraction");
        if (!(p > 0.0 && p <= 1.0))
            throw ConfigError("training fraction must be in (0, 1]");
        return FractionPerClass{p};
    }
    if (kind == "subjects") {
        auto subjects = split_on(rest, ',');
        if (subjects.empty())
            throw ConfigError("cross-subject split needs at least one training subject");
        return CrossSubject{std::move(subjects)};
    }
    if (kind == "kfold") {
        const auto parts = split_on(rest, ':');
        if (parts.size() != 2)
            throw ConfigError("kfold split expects kfold:<folds>:<fold>");
        KFold k{parse_count(parts[0], "fold count"), parse_count(parts[1], "fold index")};
        if (k.folds < 2 || k.fold >= k.folds)
            throw ConfigError("kfold needs folds >= 2 and fold < folds");
        return k;
    }
    throw ConfigError("unknown split protocol '" + text + "'");
}

std::string to_string(const SplitSpec& spec)
{
    return std::visit(
        overloaded{
            [](const FixedCountPerClass& s) { return "count:" + std::to_string(s.count); },
            [](const FractionPerClass& s) {
                std::ostringstream o;
                o << "fraction:" << s.fraction;
                return o.str();
            },
            [](const CrossSubject& s) {
                std::string out = "subjects:";
                for (std::size_t i = 0; i < s.train_subjects.size(); ++i)
                    out += (i ? "," : "") + s.train_subjects[i];
                return out;
            },
            [](const KFold& s) {
                return "kfold:" + std::to_string(s.folds) + ":" + std::to_string(s.fold);
            }},
        spec);
}

std::size_t fraction_count(double fraction, std::size_t class_size)
{
    // Slack absorbs products like 6 * (1/3.0) landing just above an integer.
    const double raw = std::ceil(fraction * static_cast<double>(class_size) - 1e-9);
    return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(raw, 1.0)), 1, class_size);
}

SplitResult split_train_test(const LabeledDataset& dataset, const SplitSpec& spec,
                             std::uint64_t seed)
{
    std::map<std::string, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < dataset.sequences.size(); ++i)
        by_class[dataset.sequences[i].label()].push_back(i);

    Rng rng(seed);
    std::vector<bool> in_train(dataset.sequences.size(), false);

    std::visit(
        overloaded{
            [&](const FixedCountPerClass& s) {
                for (auto& [label, idx] : by_class) {
                    if (idx.size() < s.count)
                        throw InputError("class '" + label + "' has " +
                                         std::to_string(idx.size()) +
                                         " sequences, fewer than the requested " +
                                         std::to_string(s.count) + " training sequences");
                    rng.shuffle(idx);
                    for (std::size_t k = 0; k < s.count; ++k)
                        in_train[idx[k]] = true;
                }
            },
            [&](const FractionPerClass& s) {
                if (!(s.fraction > 0.0 && s.fraction <= 1.0))
                    throw ConfigError("training fraction must be in (0, 1]");
                for (auto& [label, idx] : by_class) {
                    rng.shuffle(idx);
                    const std::size_t n = fraction_count(s.fraction, idx.size());
                    for (std::size_t k = 0; k < n; ++k)
                        in_train[idx[k]] = true;
                }
            },
            [&](const CrossSubject& s) {
                const std::set<std::string> train(s.train_subjects.begin(), s.train_subjects.end());
                for (std::size_t i = 0; i < dataset.sequences.size(); ++i) {
                    const auto& subject = dataset.sequences[i].subject();
                    if (!subject)
                        throw InputError("cross-subject split: sequence " + std::to_string(i) +
                                         " has no subject id");
                    in_train[i] = train.contains(*subject);
                }
            },
            [&](const KFold& s) {
                if (s.folds < 2 || s.fold >= s.folds)
                    throw ConfigError("kfold needs folds >= 2 and fold < folds");
                for (auto& [label, idx] : by_class) {
                    rng.shuffle(idx);
                    for (std::size_t k = 0; k < idx.size(); ++k)
                        in_train[idx[k]] = (k % s.folds) != s.fold;
                }
            }},
        spec);

    SplitResult out;
    for (std::size_t i = 0; i < in_train.size(); ++i)
        (in_train[i] ? out.train_indices : out.test_indices).push_back(i);
    out.train = dataset.subset(out.train_indices);
    out.test = dataset.subset(out.test_indices);
    return out;
}

} // namespace subskel
