#include <algorithm>
#include <fstream>
#include <istream>

#include <fmt/format.h>

#include "oneshot/experiment.hpp"
#include "text.hpp"

namespace oneshot {
namespace {

std::string normalize_key(std::string_view key) {
  std::string k(text::trim(key));
  while (!k.empty() && k.front() == '-') k.erase(k.begin());
  std::replace(k.begin(), k.end(), '_', '-');
  return k;
}

template <typename Int>
Int parse_count(std::string_view key, std::string_view value) {
  const auto v = text::parse_int<Int>(value);
  if (!v) throw ManifestError(fmt::format("{}: expected an integer, got '{}'", key, value));
  return *v;
}

double parse_real(std::string_view key, std::string_view value) {
  const auto v = text::parse_double(value);
  if (!v) throw ManifestError(fmt::format("{}: expected a number, got '{}'", key, value));
  return *v;
}

std::vector<std::size_t> parse_count_list(std::string_view key, std::string_view value) {
  std::vector<std::size_t> out;
  for (const auto& tok : text::split_trimmed(value, ',')) out.push_back(parse_count<std::size_t>(key, tok));
  if (out.empty()) throw ManifestError(fmt::format("{}: empty list", key));
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ManifestError(fmt::format("{}: expected true or false, got '{}'", key, value));
}

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view value) {
  std::filesystem::path p{std::string(value)};
  if (p.is_relative() && !base.empty()) p = base / p;
  return p;
}

}  // namespace

void ExperimentManifest::set(std::string_view raw_key, std::string_view raw_value,
                             const std::filesystem::path& base_dir) {
  const std::string key = normalize_key(raw_key);
  const std::string_view value = text::trim(raw_value);
  try {
    if (key == "dataset") {
      dataset = resolve(base_dir, value);
    } else if (key == "schema") {
      schema = resolve(base_dir, value);
    } else if (key == "out") {
      output_dir = resolve(base_dir, value);
    } else if (key == "exclude") {
      if (value == "all-attacks" || value == "all") {
        exclude.clear();
      } else {
        for (auto& name : text::split_trimmed(value, ',')) {
          if (std::find(exclude.begin(), exclude.end(), name) == exclude.end()) {
            exclude.push_back(std::move(name));
          }
        }
      }
    } else if (key == "epochs") {
      training.n_epochs = parse_count<std::size_t>(key, value);
    } else if (key == "batch-size") {
      training.train_batch_size = parse_count<std::size_t>(key, value);
    } else if (key == "test-batch-size") {
      training.test_batch_size = parse_count<std::size_t>(key, value);
    } else if (key == "minibatch") {
      training.minibatch_size = parse_count<std::size_t>(key, value);
    } else if (key == "votes") {
      votes = parse_count_list(key, value);
    } else if (key == "cm-votes") {
      cm_votes = parse_count<std::size_t>(key, value);
    } else if (key == "seed") {
      training.seed = parse_count<std::uint64_t>(key, value);
    } else if (key == "arch") {
      auto widths = parse_count_list(key, value);
      training.embedding_width = widths.back();
      widths.pop_back();
      training.hidden_widths = std::move(widths);
    } else if (key == "activation") {
      training.activation = parse_activation(value);
    } else if (key == "loss") {
      training.loss.kind = parse_loss_kind(value);
    } else if (key == "margin") {
      training.loss.margin = parse_real(key, value);
    } else if (key == "lambda") {
      training.loss.lambda = parse_real(key, value);
    } else if (key == "lr") {
      training.optimizer.learning_rate = parse_real(key, value);
    } else if (key == "momentum") {
      training.optimizer.momentum = parse_real(key, value);
    } else if (key == "fresh-batch") {
      training.fresh_batch_per_epoch = parse_bool(key, value);
    } else {
      throw ManifestError(fmt::format("unknown manifest key '{}'", raw_key));
    }
  } catch (const ManifestError&) {
    throw;
  } catch (const Error& e) {
    throw ManifestError(fmt::format("{}: {}", key, e.what()));
  }
}

void ExperimentManifest::validate() const {
  if (dataset.empty()) throw ManifestError("manifest names no dataset");
  if (schema.empty()) throw ManifestError("manifest names no schema");
  if (!std::filesystem::is_regular_file(dataset)) {
    throw ManifestError(fmt::format("dataset file '{}' does not exist", dataset.string()));
  }
  if (!std::filesystem::is_regular_file(schema)) {
    throw ManifestError(fmt::format("schema file '{}' does not exist", schema.string()));
  }
  if (votes.empty() || std::find(votes.begin(), votes.end(), 0u) != votes.end() ||
      cm_votes == 0) {
    throw ManifestError("vote counts must be positive");
  }
  try {
    training.validate();
  } catch (const ConfigError& e) {
    throw ManifestError(e.what());
  }
}

ExperimentManifest parse_manifest(std::istream& in, const std::filesystem::path& base_dir) {
  ExperimentManifest m;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = text::strip_comment(raw);
    if (line.empty()) continue;
    std::string_view key, value;
    if (!text::split_key_value(line, key, value)) {
      throw ManifestError(fmt::format("manifest line {}: expected 'key = value'", line_no));
    }
    m.set(key, value, base_dir);
  }
  return m;
}

ExperimentManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError(fmt::format("cannot open manifest '{}'", path.string()));
  return parse_manifest(in, path.parent_path());
}

RawDataset load_manifest_dataset(const ExperimentManifest& manifest) {
  return load_dataset(manifest.dataset, load_schema(manifest.schema));
}

std::vector<ClassIndex> excluded_classes(const ExperimentManifest& manifest,
                                         const RawDataset& raw) {
  std::vector<ClassIndex> out;
  if (manifest.exclude.empty()) {
    for (std::size_t c = 0; c < raw.num_classes(); ++c) {
      if (c != raw.normal_class) out.push_back(c);
    }
  } else {
    for (const auto& name : manifest.exclude) {
      const auto it = std::find(raw.class_names.begin(), raw.class_names.end(), name);
      if (it == raw.class_names.end()) {
        throw ManifestError(fmt::format("excluded class '{}' does not occur in the dataset", name));
      }
      out.push_back(static_cast<ClassIndex>(it - raw.class_names.begin()));
    }
  }
  if (out.empty()) throw ManifestError("no attack class to exclude");
  return out;
}

}  // namespace oneshot
