#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "oneshot/dataset.hpp"
#include "oneshot/error.hpp"
#include "oneshot/evaluator.hpp"
#include "oneshot/trainer.hpp"

namespace oneshot {

/// Invalid manifest or run-time reference (maps to exit status 2).
class ManifestError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Everything needed to run the leave-one-attack-out protocol on one dataset.
///
/// Manifest files are `key = value` lines using the same keys as the
/// command-line flags (without the leading dashes, '-' or '_' accepted):
/// dataset, schema, exclude, epochs, batch-size, test-batch-size, minibatch,
/// votes, cm-votes, seed, arch, activation, loss, margin, lambda, lr,
/// momentum, fresh-batch, out. Relative paths resolve against the manifest's
/// directory.
struct ExperimentManifest {
  std::filesystem::path dataset;
  std::filesystem::path schema;
  std::filesystem::path output_dir = "oneshot-out";
  std::vector<std::string> exclude;  // empty = every attack class
  TrainingConfig training;
  std::vector<std::size_t> votes = kDefaultVoteSweep;
  std::size_t cm_votes = 5;

  /// Applies one setting. Throws ManifestError on unknown keys or bad values.
  void set(std::string_view key, std::string_view value,
           const std::filesystem::path& base_dir = {});

  /// Checks values and that the dataset/schema files exist.
  void validate() const;
};

ExperimentManifest parse_manifest(std::istream& in, const std::filesystem::path& base_dir = {});
ExperimentManifest load_manifest(const std::filesystem::path& path);

/// Loads the dataset and schema named by the manifest.
RawDataset load_manifest_dataset(const ExperimentManifest& manifest);

/// Class indices to exclude, resolved against the dataset's inventory.
std::vector<ClassIndex> excluded_classes(const ExperimentManifest& manifest,
                                         const RawDataset& raw);

/// One leave-one-class-out experiment held in memory.
struct ExperimentResult {
  ClassIndex excluded_class = 0;
  EncodedDataset encoded;
  TrainingResult training;
  std::vector<SweepRow> sweep;
  ConfusionMatrix cm;  // at cm_votes
  MetricsReport metrics;
};

/// Split, fit the encoder on the training pools, encode, train, and run the
/// vote sweep. `observer` sees every training batch.
ExperimentResult run_experiment(const RawDataset& raw, ClassIndex excluded,
                                const ExperimentManifest& manifest,
                                const BatchObserver& observer = {});

/// Writes cm.csv, cm.txt, metrics.json, sweep.csv, trace.csv and checkpoint.
void write_experiment(const std::filesystem::path& dir, const ExperimentResult& result,
                      std::size_t cm_votes);

std::string experiment_dir_name(const std::string& class_name);

struct ExperimentOutcome {
  std::string excluded_class;
  std::filesystem::path directory;
  bool ok = false;
  std::string error;
  std::optional<MetricsReport> metrics;
  std::optional<double> reference_accuracy;  // percent, from the schema
};

struct RunSummary {
  std::vector<ExperimentOutcome> experiments;

  /// 0 when every experiment succeeded, 1 otherwise.
  int exit_status() const;
};

/// Runs every requested exclusion, writing one subdirectory per experiment
/// plus summary.csv / summary.txt. An experiment failure is recorded and the
/// loop continues. Throws ManifestError before writing anything when the
/// manifest is invalid. Progress goes to `log` when given.
RunSummary cmd_run(const ExperimentManifest& manifest, std::ostream* log = nullptr);

/// Recomputes metrics from a stored confusion matrix.
MetricsReport cmd_metrics(const std::filesystem::path& cm_path,
                          const std::optional<std::string>& excluded_class = {});

struct SeedReport {
  std::string excluded_class;
  std::vector<std::uint64_t> seeds;
  std::vector<double> overall_accuracy;  // fractions, per seed
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Reruns the manifest's first exclusion once per seed (no artifacts).
SeedReport cmd_seed_report(const ExperimentManifest& manifest,
                           const std::vector<std::uint64_t>& seeds,
                           std::ostream* log = nullptr);

void write_seed_report(std::ostream& out, const SeedReport& report);

}  // namespace oneshot
