#include "oneshot/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "oneshot/report.hpp"

namespace oneshot {
namespace {

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  out << contents;
  if (!out) throw Error(fmt::format("failed writing '{}'", path.string()));
}

template <typename Writer>
std::string render(Writer&& writer) {
  std::ostringstream ss;
  writer(ss);
  return ss.str();
}

std::optional<double> reference_for(const RawDataset& raw, const std::string& cls) {
  const auto it = raw.schema.reference_accuracy.find(cls);
  if (it == raw.schema.reference_accuracy.end()) return std::nullopt;
  return it->second;
}

void write_summary(const std::filesystem::path& dir, const RunSummary& summary) {
  std::ostringstream csv;
  csv << "excluded_class,status,overall_accuracy,new_class_tpr,new_class_fnr,normal_tnr,"
         "normal_fpr,reference_overall,error\n";
  for (const auto& e : summary.experiments) {
    csv << e.excluded_class << ',' << (e.ok ? "ok" : "failed") << ',';
    if (e.metrics) {
      const auto& m = *e.metrics;
      csv << percent(m.overall_accuracy) << ',' << percent(m.new_class().tpr) << ','
          << percent(m.new_class().fnr) << ',' << percent(m.tnr) << ',' << percent(m.fpr);
    } else {
      csv << ",,,,";
    }
    csv << ',' << (e.reference_accuracy ? fmt::format("{:.2f}", *e.reference_accuracy) : "");
    std::string err = e.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    csv << ',' << err << '\n';
  }
  write_file(dir / "summary.csv", csv.str());

  std::ostringstream txt;
  txt << fmt::format("{:<20}  {:>8}  {:>9}  {:>8}  {}\n", "excluded class", "overall", "new TPR",
                     "reference", "status");
  bool any_reference = false;
  for (const auto& e : summary.experiments) {
    const std::string overall = e.metrics ? percent(e.metrics->overall_accuracy) + "%" : "-";
    const std::string tpr = e.metrics ? percent(e.metrics->new_class().tpr) + "%" : "-";
    const std::string ref =
        e.reference_accuracy ? fmt::format("{:.2f}%*", *e.reference_accuracy) : "-";
    any_reference = any_reference || e.reference_accuracy.has_value();
    txt << fmt::format("{:<20}  {:>8}  {:>9}  {:>8}  {}\n", e.excluded_class, overall, tpr, ref,
                       e.ok ? "ok" : "failed: " + e.error);
  }
  if (any_reference) {
    txt << "\n* reference: externally reported overall accuracy for the same dataset and "
           "excluded class.\n  It was produced with an unpublished network architecture, so "
           "it is not\n  reproducible exactly and is shown for orientation only.\n";
  }
  write_file(dir / "summary.txt", txt.str());
}

}  // namespace

std::string experiment_dir_name(const std::string& class_name) {
  std::string slug;
  for (unsigned char ch : class_name) {
    if (std::isalnum(ch)) {
      slug.push_back(static_cast<char>(std::tolower(ch)));
    } else if (!slug.empty() && slug.back() != '_') {
      slug.push_back('_');
    }
  }
  while (!slug.empty() && slug.back() == '_') slug.pop_back();
  return "exclude_" + (slug.empty() ? std::string("class") : slug);
}

ExperimentResult run_experiment(const RawDataset& raw, ClassIndex excluded,
                                const ExperimentManifest& manifest,
                                const BatchObserver& observer) {
  const auto& cfg = manifest.training;
  if (raw.num_classes() < 3) {
    throw ConfigError(fmt::format(
        "training needs a dataset with at least 3 classes, found {}", raw.num_classes()));
  }
  auto split = training_split(raw.labels, raw.num_classes(), raw.normal_class, excluded,
                              cfg.seed, raw.class_names);
  const auto fit_rows = split.training_rows();
  ExperimentResult result;
  result.excluded_class = excluded;
  result.encoded = encode(raw, fit_encoder(raw, fit_rows));
  result.training = run_training(result.encoded, std::move(split), cfg, observer);

  std::vector<std::size_t> votes = manifest.votes;
  if (std::find(votes.begin(), votes.end(), manifest.cm_votes) == votes.end()) {
    votes.push_back(manifest.cm_votes);
  }
  auto all = vote_sweep(result.training.model, result.encoded, result.training.split,
                        cfg.test_batch_size, votes, derive_seed(cfg.seed, SeedStream::evaluation));
  for (auto& row : all) {
    if (row.votes == manifest.cm_votes) {
      result.cm = row.cm;
      result.metrics = row.metrics;
    }
  }
  // The sweep table keeps the requested vote counts only.
  for (auto& row : all) {
    if (std::find(manifest.votes.begin(), manifest.votes.end(), row.votes) !=
        manifest.votes.end()) {
      result.sweep.push_back(std::move(row));
    }
  }
  return result;
}

void write_experiment(const std::filesystem::path& dir, const ExperimentResult& result,
                      std::size_t cm_votes) {
  // Render everything first so a failure leaves no partial directory.
  const auto cm_csv = render([&](std::ostream& o) { write_cm_csv(o, result.cm); });
  const auto cm_txt = render([&](std::ostream& o) { write_cm_table(o, result.cm); });
  const auto json = metrics_json(result.metrics, cm_votes, &result.sweep);
  const auto sweep = render([&](std::ostream& o) { write_sweep_csv(o, result.sweep); });
  const auto trace = render([&](std::ostream& o) { write_trace(o, result.training.trace); });
  const auto checkpoint =
      render([&](std::ostream& o) { write_checkpoint(o, result.training.model); });

  std::filesystem::create_directories(dir);
  write_file(dir / "cm.csv", cm_csv);
  write_file(dir / "cm.txt", cm_txt);
  write_file(dir / "metrics.json", json);
  write_file(dir / "sweep.csv", sweep);
  write_file(dir / "trace.csv", trace);
  write_file(dir / "checkpoint", checkpoint);
}

int RunSummary::exit_status() const {
  return std::all_of(experiments.begin(), experiments.end(),
                     [](const ExperimentOutcome& e) { return e.ok; })
             ? 0
             : 1;
}

RunSummary cmd_run(const ExperimentManifest& manifest, std::ostream* log) {
  manifest.validate();
  RawDataset raw;
  std::vector<ClassIndex> targets;
  try {
    raw = load_manifest_dataset(manifest);
    targets = excluded_classes(manifest, raw);
  } catch (const ManifestError&) {
    throw;
  } catch (const Error& e) {
    throw ManifestError(e.what());
  }

  std::filesystem::create_directories(manifest.output_dir);
  RunSummary summary;
  for (auto excluded : targets) {
    ExperimentOutcome outcome;
    outcome.excluded_class = raw.class_names[excluded];
    outcome.directory = manifest.output_dir / experiment_dir_name(outcome.excluded_class);
    outcome.reference_accuracy = reference_for(raw, outcome.excluded_class);
    if (log) *log << "experiment: excluding '" << outcome.excluded_class << "'\n";
    try {
      const auto result = run_experiment(raw, excluded, manifest);
      write_experiment(outcome.directory, result, manifest.cm_votes);
      outcome.metrics = result.metrics;
      outcome.ok = true;
      if (log) {
        *log << fmt::format("  overall accuracy {}%, new-class TPR {}%\n",
                            percent(result.metrics.overall_accuracy),
                            percent(result.metrics.new_class().tpr));
      }
    } catch (const std::exception& e) {
      outcome.error = e.what();
      if (log) *log << "  failed: " << e.what() << '\n';
    }
    summary.experiments.push_back(std::move(outcome));
  }
  write_summary(manifest.output_dir, summary);
  return summary;
}

MetricsReport cmd_metrics(const std::filesystem::path& cm_path,
                          const std::optional<std::string>& excluded_class) {
  const auto cm = load_cm_csv(cm_path);
  std::optional<ClassIndex> excluded;
  if (excluded_class) {
    const auto& names = cm.class_names();
    const auto it = std::find(names.begin(), names.end(), *excluded_class);
    if (it == names.end()) {
      throw ConfigError(fmt::format("class '{}' is not in the confusion matrix", *excluded_class));
    }
    excluded = static_cast<ClassIndex>(it - names.begin());
  }
  return metrics(cm, excluded);
}

SeedReport cmd_seed_report(const ExperimentManifest& manifest,
                           const std::vector<std::uint64_t>& seeds, std::ostream* log) {
  if (seeds.size() < 2) throw ConfigError("a seed report needs at least two seeds");
  manifest.validate();
  const auto raw = load_manifest_dataset(manifest);
  const auto targets = excluded_classes(manifest, raw);

  SeedReport report;
  report.excluded_class = raw.class_names[targets.front()];
  for (auto seed : seeds) {
    ExperimentManifest m = manifest;
    m.training.seed = seed;
    m.votes = {m.cm_votes};
    const auto result = run_experiment(raw, targets.front(), m);
    report.seeds.push_back(seed);
    report.overall_accuracy.push_back(result.metrics.overall_accuracy);
    if (log) {
      *log << fmt::format("seed {}: overall accuracy {}%\n", seed,
                          percent(result.metrics.overall_accuracy));
    }
  }
  const auto& acc = report.overall_accuracy;
  double sum = 0.0;
  for (double a : acc) sum += a;
  report.mean = sum / static_cast<double>(acc.size());
  report.min = *std::min_element(acc.begin(), acc.end());
  report.max = *std::max_element(acc.begin(), acc.end());
  return report;
}

void write_seed_report(std::ostream& out, const SeedReport& report) {
  out << "excluded class: " << report.excluded_class << '\n';
  for (std::size_t i = 0; i < report.seeds.size(); ++i) {
    out << "seed " << report.seeds[i] << ": " << percent(report.overall_accuracy[i]) << "%\n";
  }
  out << "mean: " << percent(report.mean) << "%\n";
  out << "min: " << percent(report.min) << "%\n";
  out << "max: " << percent(report.max) << "%\n";
}

}  // namespace oneshot
