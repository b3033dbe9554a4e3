// Serial reference vs OpenMP path for the three parallel kernels. Run with
// OMP_NUM_THREADS set to compare thread counts; both paths give identical
// results, so only time differs.

#include <benchmark/benchmark.h>

#include <random>

#include "fixtures.hpp"
#include "ltccp/data/cohort.hpp"
#include "ltccp/models/ltccp.hpp"
#include "ltccp/nn/batch_gradient.hpp"
#include "ltccp/parallel.hpp"
#include "ltccp/synth/synthgen.hpp"

using namespace ltccp;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::parallel : Execution::serial; }

void BM_BatchGradient(benchmark::State& state) {
    const auto model = testing::random_model(3, 32, 64, 1, 0.2);
    std::mt19937_64 rng(2);
    std::vector<nn::SequenceExample> batch;
    for (int i = 0; i < 256; ++i) batch.push_back(testing::random_example(10, 3, 64, 5, rng));
    for (auto _ : state) benchmark::DoNotOptimize(nn::batch_gradient(model, batch, mode(state)));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(batch.size()));
}

void BM_GenCorpus(benchmark::State& state) {
    synth::SynthParams p;
    p.num_papers = 5000;
    p.seed = 3;
    for (auto _ : state) benchmark::DoNotOptimize(synth::gen_corpus(p, mode(state)));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(p.num_papers));
}

void BM_PredictBatch(benchmark::State& state) {
    synth::SynthParams p;
    p.num_papers = 3000;
    p.seed = 4;
    const auto corpus = synth::gen_corpus(p);
    const auto samples =
        data::make_samples(data::filter_cohort(corpus.sequences, data::CohortConfig{}), data::FeatureConfig{});
    models::LtccpModel model;
    model.params = testing::random_model(3, 32, 64, 5, 0.2);
    model.horizon = 5;
    for (auto _ : state) benchmark::DoNotOptimize(models::predict_ltccp_batch(model, samples, 5, mode(state)));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(samples.size()));
}

}  // namespace

// Argument 0 = serial reference, 1 = parallel.
BENCHMARK(BM_BatchGradient)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GenCorpus)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PredictBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
