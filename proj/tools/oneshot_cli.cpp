// oneshot: leave-one-attack-out experiments with a twin embedding network.
//
//   oneshot run --manifest exp.conf [overrides...]
//   oneshot metrics --cm cm.csv [--excluded DoS] [--json]
//   oneshot seed-report --manifest exp.conf --seeds 1,2,3
//   oneshot synth --out data/

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oneshot/experiment.hpp"
#include "oneshot/report.hpp"
#include "oneshot/synthetic.hpp"

namespace {

constexpr int kExitFailures = 1;
constexpr int kExitBadManifest = 2;

// Flags that mirror manifest keys; values are applied on top of the file.
const std::vector<std::pair<std::string, std::string>> kOverrideFlags = {
    {"dataset", "dataset file (CSV)"},
    {"schema", "schema file"},
    {"epochs", "training epochs"},
    {"batch-size", "pairs in the training batch"},
    {"test-batch-size", "evaluation instances in total"},
    {"minibatch", "pairs per optimizer step"},
    {"votes", "comma list of vote counts to sweep"},
    {"cm-votes", "vote count for the reported confusion matrix"},
    {"seed", "master seed"},
    {"arch", "comma list of layer widths, last one is the embedding"},
    {"activation", "hidden activation: relu, tanh, sigmoid, linear"},
    {"loss", "contrastive or regularized-log"},
    {"margin", "contrastive margin"},
    {"lambda", "L2 weight for the regularized log loss"},
    {"lr", "learning rate"},
    {"momentum", "momentum coefficient"},
    {"fresh-batch", "draw a new pair batch every epoch (true/false)"},
    {"out", "output directory"},
};

struct RunOptions {
  std::string manifest;
  std::map<std::string, std::string> overrides;
  std::vector<std::string> exclude;
  bool quiet = false;
};

void add_overrides(CLI::App* cmd, RunOptions& opts) {
  cmd->add_option("--manifest,-m", opts.manifest, "experiment manifest file");
  for (const auto& [name, help] : kOverrideFlags) {
    cmd->add_option("--" + name, opts.overrides[name], help);
  }
  cmd->add_option("--exclude", opts.exclude,
                  "class to exclude (repeatable, comma list, or all-attacks)");
}

oneshot::ExperimentManifest build_manifest(const CLI::App* cmd, const RunOptions& opts) {
  oneshot::ExperimentManifest m;
  if (!opts.manifest.empty()) m = oneshot::load_manifest(opts.manifest);
  const auto cwd = std::filesystem::current_path();
  for (const auto& [name, help] : kOverrideFlags) {
    if (cmd->count("--" + name) > 0) m.set(name, opts.overrides.at(name), cwd);
  }
  if (!opts.exclude.empty()) {
    m.exclude.clear();
    for (const auto& e : opts.exclude) m.set("exclude", e, cwd);
  }
  return m;
}

std::vector<std::uint64_t> parse_seeds(const std::string& list) {
  std::vector<std::uint64_t> seeds;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const auto comma = std::min(list.find(',', pos), list.size());
    const auto tok = list.substr(pos, comma - pos);
    if (!tok.empty()) seeds.push_back(std::stoull(tok));
    pos = comma + 1;
  }
  return seeds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-shot detection of unseen attack classes with a twin network"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run = app.add_subcommand("run", "train and evaluate one experiment per excluded class");
  add_overrides(run, run_opts);
  run->add_flag("--quiet,-q", run_opts.quiet, "no progress output");

  std::string cm_path, excluded_name;
  bool as_json = false;
  auto* met = app.add_subcommand("metrics", "recompute metrics from a stored confusion matrix");
  met->add_option("--cm", cm_path, "confusion matrix CSV")->required();
  met->add_option("--excluded", excluded_name, "name of the excluded (new) class");
  met->add_flag("--json", as_json, "print JSON instead of key = value lines");

  RunOptions seed_opts;
  std::string seed_list;
  auto* seeds = app.add_subcommand("seed-report", "rerun one experiment under several seeds");
  add_overrides(seeds, seed_opts);
  seeds->add_option("--seeds", seed_list, "comma list of seeds (at least two)")->required();

  std::string synth_out;
  oneshot::GaussianClusterSpec spec;
  auto* synth = app.add_subcommand("synth", "write a Gaussian-cluster dataset and schema");
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--classes", spec.num_classes, "number of classes");
  synth->add_option("--per-class", spec.per_class, "instances per class");
  synth->add_option("--features", spec.features, "feature count");
  synth->add_option("--separation", spec.separation, "centre distance in standard deviations");
  synth->add_option("--seed", spec.seed, "generator seed");
  std::string layout = "axes";
  synth->add_option("--layout", layout, "centre layout: axes, ring or line");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      oneshot::RunSummary summary;
      try {
        const auto manifest = build_manifest(run, run_opts);
        summary = oneshot::cmd_run(manifest, run_opts.quiet ? nullptr : &std::cerr);
      } catch (const oneshot::ManifestError& e) {
        std::cerr << "invalid manifest: " << e.what() << '\n';
        return kExitBadManifest;
      }
      for (const auto& e : summary.experiments) {
        std::cout << e.excluded_class << ": "
                  << (e.ok ? oneshot::percent(e.metrics->overall_accuracy) + "%"
                           : "failed (" + e.error + ")")
                  << '\n';
      }
      return summary.exit_status();
    }

    if (met->parsed()) {
      const auto report = oneshot::cmd_metrics(
          cm_path, excluded_name.empty() ? std::nullopt : std::optional(excluded_name));
      if (as_json) {
        std::cout << oneshot::metrics_json(report) << '\n';
      } else {
        oneshot::write_metrics_text(std::cout, report);
      }
      return 0;
    }

    if (seeds->parsed()) {
      oneshot::SeedReport report;
      try {
        const auto manifest = build_manifest(seeds, seed_opts);
        report = oneshot::cmd_seed_report(manifest, parse_seeds(seed_list), &std::cerr);
      } catch (const oneshot::ManifestError& e) {
        std::cerr << "invalid manifest: " << e.what() << '\n';
        return kExitBadManifest;
      }
      oneshot::write_seed_report(std::cout, report);
      return 0;
    }

    if (synth->parsed()) {
      spec.layout = oneshot::parse_cluster_layout(layout);
      const auto ds = oneshot::make_gaussian_clusters(spec);
      const std::filesystem::path dir = synth_out;
      std::filesystem::create_directories(dir);
      std::ofstream csv(dir / "clusters.csv");
      oneshot::write_numeric_csv(csv, ds);
      oneshot::save_schema(dir / "clusters.schema", ds.schema);
      std::cout << "wrote " << ds.labels.size() << " rows to " << (dir / "clusters.csv").string()
                << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailures;
  }
  return 0;
}
