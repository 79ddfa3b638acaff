#include "oneshot/trainer.hpp"

#include <chrono>
#include <ostream>

#include <fmt/format.h>

#include "oneshot/error.hpp"

namespace oneshot {

void TrainingConfig::validate() const {
  if (train_batch_size == 0 || test_batch_size == 0 || n_epochs == 0 || minibatch_size == 0 ||
      embedding_width == 0) {
    throw ConfigError("training counts must be positive");
  }
  if (minibatch_size > train_batch_size) {
    throw ConfigError(fmt::format("minibatch size {} exceeds the training batch size {}",
                                  minibatch_size, train_batch_size));
  }
  for (auto w : hidden_widths) {
    if (w == 0) throw ConfigError("hidden layer widths must be positive");
  }
  loss.validate();
}

std::vector<std::size_t> TrainingConfig::layer_sizes(std::size_t input_width) const {
  std::vector<std::size_t> sizes{input_width};
  sizes.insert(sizes.end(), hidden_widths.begin(), hidden_widths.end());
  sizes.push_back(embedding_width);
  return sizes;
}

std::size_t TrainingConfig::steps_per_epoch() const {
  return (train_batch_size + minibatch_size - 1) / minibatch_size;
}

void write_trace(std::ostream& out, const TrainingTrace& trace) {
  out << "epoch,loss,seconds\n";
  for (const auto& e : trace.epochs) {
    out << fmt::format("{},{:.10g},{:.6f}\n", e.epoch, e.mean_loss, e.seconds);
  }
}

ExperimentSplit training_split(std::span<const ClassIndex> labels, std::size_t num_classes,
                               ClassIndex normal_class, ClassIndex excluded_class,
                               std::uint64_t seed, std::span<const std::string> class_names) {
  Rng rng(derive_seed(seed, SeedStream::split));
  return make_split(labels, num_classes, normal_class, excluded_class, rng, class_names);
}

TrainingResult run_training(const EncodedDataset& ds, ClassIndex excluded_class,
                            const TrainingConfig& cfg, const BatchObserver& observer) {
  if (ds.num_classes() < 3) {
    throw ConfigError(fmt::format(
        "training needs a dataset with at least 3 classes, found {}", ds.num_classes()));
  }
  return run_training(ds,
                      training_split(ds.labels, ds.num_classes(), ds.normal_class,
                                     excluded_class, cfg.seed, ds.class_names),
                      cfg, observer);
}

TrainingResult run_training(const EncodedDataset& ds, ExperimentSplit split,
                            const TrainingConfig& cfg, const BatchObserver& observer) {
  cfg.validate();
  if (ds.num_classes() < 3) {
    throw ConfigError(fmt::format(
        "training needs a dataset with at least 3 classes, found {}", ds.num_classes()));
  }

  Rng pair_rng(derive_seed(cfg.seed, SeedStream::pairs));
  Rng init_rng(derive_seed(cfg.seed, SeedStream::init));

  PairBatch batch = generate_training_batch(split, cfg.train_batch_size, pair_rng);
  if (observer) observer(0, batch);

  TrainingResult result{init_model(cfg.layer_sizes(ds.width()), cfg.activation, init_rng),
                        std::move(split), {}};
  OptimizerState state;
  result.trace.epochs.reserve(cfg.n_epochs);

  for (std::size_t epoch = 0; epoch < cfg.n_epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    if (cfg.fresh_batch_per_epoch && epoch > 0) {
      Rng epoch_rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(SeedStream::epoch_pairs),
                                epoch));
      batch = generate_training_batch(result.split, cfg.train_batch_size, epoch_rng);
      if (observer) observer(epoch, batch);
    }

    EpochRecord record;
    record.epoch = epoch;
    const std::span<const InstancePair> pairs(batch.pairs);
    for (std::size_t begin = 0; begin < pairs.size(); begin += cfg.minibatch_size) {
      const auto chunk = pairs.subspan(begin, std::min(cfg.minibatch_size, pairs.size() - begin));
      const auto grads = batch_gradients(result.model, ds.features, chunk, cfg.loss);
      record.loss += grads.loss;
      apply_update(result.model, grads.gradients, state, cfg.optimizer);
    }
    record.mean_loss = record.loss / static_cast<double>(pairs.size());
    record.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.trace.epochs.push_back(record);
  }
  result.trace.optimizer_steps = state.steps;
  if (!result.model.all_finite()) {
    throw NumericalError("training diverged: non-finite parameters", 0);
  }
  return result;
}

}  // namespace oneshot
