#include "subskel/classify.hpp"
#include "subskel/dataset_io.hpp"
#include "subskel/synthetic.hpp"

#include <benchmark/benchmark.h>

#include <spdlog/spdlog.h>

namespace {

using namespace subskel;

SyntheticSpec spec(std::size_t classes, std::size_t per_class)
{
    SyntheticSpec s;
    s.skeleton = read_skeleton_file(std::string(SUBSKEL_DATA_DIR) + "/skeletons/kintrans10.json").skeleton;
    s.classes = classes;
    s.sequences_per_class = per_class;
    s.frames_mean = 40;
    s.frames_sd = 8;
    s.noise_sd = 0.01;
    s.speed_jitter = 0.2;
    s.discriminative = {{s.skeleton.index_of("left_hand"), std::nullopt, 8},
                        {s.skeleton.index_of("right_hand"), std::nullopt, 8}};
    s.seed = 7;
    return s;
}

// End-to-end query latency (normalize, extract, simplify, nearest neighbor)
// for a 1NN-s model over range(0) classes of 20 sequences.
void BM_Query1nnS(benchmark::State& state)
{
    spdlog::set_level(spdlog::level::warn);
    const auto classes = std::size_t(state.range(0));
    const auto train = generate(spec(classes, 20));
    auto test_spec = spec(classes, 1);
    test_spec.seed = 8;
    const auto test = generate(test_spec);

    const auto& sk = train.skeleton;
    const auto t = make_template({{"left_hand", std::nullopt, {{sk.index_of("left_hand"), std::nullopt}}},
                                  {"right_hand", std::nullopt, {{sk.index_of("right_hand"), std::nullopt}}}});
    auto cs = parse_classifier("1nn-s");
    cs.measure = {MeasureKind::CF, 1e-6};
    const auto model = train_model(train, cs, t, {});

    std::size_t q = 0, computations = 0;
    for (auto _ : state) {
        const auto p = model.classify(test.sequences[q++ % test.sequences.size()]);
        computations += p.distance_computations;
        benchmark::DoNotOptimize(p);
    }
    state.counters["distances/query"] = double(computations) / double(state.iterations());
}
BENCHMARK(BM_Query1nnS)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

} // namespace
