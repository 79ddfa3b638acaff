#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <vector>

#include "oneshot/dataset.hpp"
#include "oneshot/loss.hpp"
#include "oneshot/network.hpp"
#include "oneshot/optimizer.hpp"
#include "oneshot/pairgen.hpp"
#include "oneshot/split.hpp"

namespace oneshot {

struct TrainingConfig {
  std::size_t train_batch_size = 30000;
  std::size_t test_batch_size = 30000;
  std::size_t n_epochs = 2000;
  std::size_t minibatch_size = 256;
  bool fresh_batch_per_epoch = false;
  LossConfig loss;
  std::vector<std::size_t> hidden_widths{64, 32};
  std::size_t embedding_width = 16;
  Activation activation = Activation::relu;
  OptimizerConfig optimizer;
  std::uint64_t seed = 1;

  void validate() const;
  /// Input width first, embedding width last.
  std::vector<std::size_t> layer_sizes(std::size_t input_width) const;
  std::size_t steps_per_epoch() const;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double loss = 0.0;       // summed over the epoch's pairs
  double mean_loss = 0.0;  // per pair
  double seconds = 0.0;
};

struct TrainingTrace {
  std::vector<EpochRecord> epochs;
  std::size_t optimizer_steps = 0;

  double final_loss() const noexcept { return epochs.empty() ? 0.0 : epochs.back().mean_loss; }
};

/// `epoch,loss,seconds` with loss as the mean per-pair loss.
void write_trace(std::ostream& out, const TrainingTrace& trace);

struct TrainingResult {
  SiameseModel model;
  ExperimentSplit split;
  TrainingTrace trace;
};

/// Called with each generated training batch (before any step uses it).
using BatchObserver = std::function<void(std::size_t epoch, const PairBatch&)>;

/// Leave-one-class-out training: split, one pair batch (or a fresh one per
/// epoch), then n_epochs sweeps in minibatch chunks with one optimizer step
/// per chunk. Deterministic for a given config seed.
TrainingResult run_training(const EncodedDataset& ds, ClassIndex excluded_class,
                            const TrainingConfig& cfg, const BatchObserver& observer = {});

/// Same, with a split that was already built (e.g. to fit the encoder).
TrainingResult run_training(const EncodedDataset& ds, ExperimentSplit split,
                            const TrainingConfig& cfg, const BatchObserver& observer = {});

/// The split run_training builds for this seed.
ExperimentSplit training_split(std::span<const ClassIndex> labels, std::size_t num_classes,
                               ClassIndex normal_class, ClassIndex excluded_class,
                               std::uint64_t seed,
                               std::span<const std::string> class_names = {});

}  // namespace oneshot
