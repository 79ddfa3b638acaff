#include <numeric>
#include <vector>

#include <benchmark/benchmark.h>

#include "oneshot/evaluator.hpp"
#include "oneshot/loss.hpp"
#include "oneshot/pairgen.hpp"
#include "oneshot/split.hpp"
#include "oneshot/synthetic.hpp"
#include "oneshot/trainer.hpp"

namespace {

using namespace oneshot;

struct Fixture {
  EncodedDataset ds;
  ExperimentSplit split;
  SiameseModel model;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    Fixture out;
    const auto raw = make_gaussian_clusters(GaussianClusterSpec{});
    std::vector<std::size_t> rows(raw.size());
    std::iota(rows.begin(), rows.end(), 0);
    out.ds = encode(raw, fit_encoder(raw, rows));
    out.split = training_split(out.ds.labels, out.ds.num_classes(), 0, 1, 1);
    Rng rng(3);
    out.model = init_model(TrainingConfig{}.layer_sizes(20), Activation::relu, rng);
    return out;
  }();
  return f;
}

void BM_GenerateTrainingBatch(benchmark::State& state) {
  const auto& f = fixture();
  const auto batch_size = static_cast<std::size_t>(state.range(0));
  Rng rng(5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_training_batch(f.split, batch_size, rng));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateTrainingBatch)->Arg(256)->Arg(30000)->Unit(benchmark::kMillisecond);

void BM_BatchGradients(benchmark::State& state) {
  const auto& f = fixture();
  Rng rng(6);
  const auto batch = generate_training_batch(f.split, static_cast<std::size_t>(state.range(0)), rng);
  LossConfig loss;
  loss.kind = state.range(1) ? LossKind::regularized_log : LossKind::contrastive;
  for (auto _ : state) {
    benchmark::DoNotOptimize(batch_gradients(f.model, f.ds.features, batch.pairs, loss));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BatchGradients)->Args({256, 0})->Args({256, 1})->Args({4096, 0});

void BM_EmbedRows(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(embed_rows(f.model, f.ds.features));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.ds.size()));
}
BENCHMARK(BM_EmbedRows);

void BM_Evaluate(benchmark::State& state) {
  const auto& f = fixture();
  const VoteConfig vote{static_cast<std::size_t>(state.range(0)), 4};
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(f.model, f.ds, f.split, 5000, vote));
  }
  state.SetItemsProcessed(state.iterations() * 5000);
}
BENCHMARK(BM_Evaluate)->Arg(1)->Arg(5)->Arg(30)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
