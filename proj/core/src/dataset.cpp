#include "oneshot/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <istream>
#include <unordered_map>

#include <fmt/format.h>

#include "oneshot/error.hpp"
#include "text.hpp"

namespace oneshot {
namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

ClassIndex find_class(const std::vector<std::string>& names, std::string_view name) {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw ConfigError(fmt::format("unknown class '{}'", name));
  return static_cast<ClassIndex>(it - names.begin());
}

// Orders the observed classes: normal first, then schema class_order, then
// first-seen order. Returns old->new index mapping.
std::vector<ClassIndex> order_inventory(const Schema& schema,
                                        std::vector<std::string>& observed,
                                        ClassIndex& normal_out) {
  std::optional<std::size_t> normal;
  if (!schema.normal_class.empty()) {
    const auto it = std::find(observed.begin(), observed.end(), schema.normal_class);
    if (it == observed.end()) {
      throw ParseError(
          fmt::format("normal class '{}' does not occur in the data", schema.normal_class));
    }
    normal = static_cast<std::size_t>(it - observed.begin());
  } else {
    for (std::size_t i = 0; i < observed.size() && !normal; ++i) {
      if (iequals(observed[i], "normal") || iequals(observed[i], "benign")) normal = i;
    }
  }

  std::vector<std::size_t> order;
  order.push_back(normal.value_or(0));
  for (const auto& name : schema.class_order) {
    const auto it = std::find(observed.begin(), observed.end(), name);
    if (it == observed.end()) continue;
    const auto idx = static_cast<std::size_t>(it - observed.begin());
    if (std::find(order.begin(), order.end(), idx) == order.end()) order.push_back(idx);
  }
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (std::find(order.begin(), order.end(), i) == order.end()) order.push_back(i);
  }

  std::vector<ClassIndex> remap(observed.size());
  std::vector<std::string> names;
  names.reserve(observed.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    remap[order[pos]] = pos;
    names.push_back(std::move(observed[order[pos]]));
  }
  observed = std::move(names);
  normal_out = 0;
  return remap;
}

}  // namespace

std::vector<std::size_t> RawDataset::class_counts() const {
  std::vector<std::size_t> counts(class_names.size(), 0);
  for (auto c : labels) ++counts[c];
  return counts;
}

ClassIndex RawDataset::class_index(std::string_view name) const {
  return find_class(class_names, name);
}

RawDataset parse_dataset(std::istream& in, const Schema& schema) {
  schema.validate();

  RawDataset ds;
  ds.schema = schema;
  std::vector<std::size_t> column_slot(schema.columns.size(), 0);
  for (std::size_t i = 0; i < schema.columns.size(); ++i) {
    const auto& col = schema.columns[i];
    if (col.kind == ColumnKind::numeric) {
      column_slot[i] = ds.numeric_width++;
      ds.features.push_back({col.name, col.kind, column_slot[i]});
    } else if (col.kind == ColumnKind::categorical) {
      column_slot[i] = ds.categorical.size();
      ds.categorical.emplace_back();
      ds.features.push_back({col.name, col.kind, column_slot[i]});
    }
  }
  const std::size_t label_col = schema.label_column();
  const std::size_t arity = schema.columns.size();

  std::vector<std::unordered_map<std::string, std::uint32_t>> vocab_index(ds.categorical.size());
  std::unordered_map<std::string, ClassIndex> class_lookup;
  std::vector<std::string> observed;
  std::vector<double> numeric_row(ds.numeric_width);

  std::string line;
  std::size_t line_no = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto fields = text::split(line, ',');
    if (fields.size() != arity) {
      throw ParseError(fmt::format("row {}: expected {} fields, got {}", line_no, arity,
                                   fields.size()),
                       line_no);
    }

    bool numeric_ok = true;
    std::size_t bad_field = 0;
    for (std::size_t i = 0; i < arity; ++i) {
      if (schema.columns[i].kind != ColumnKind::numeric) continue;
      const auto v = text::parse_double(fields[i]);
      if (!v) {
        numeric_ok = false;
        bad_field = i;
        break;
      }
      numeric_row[column_slot[i]] = *v;
    }
    const bool was_first = first_content_line;
    first_content_line = false;
    if (!numeric_ok) {
      if (was_first) continue;  // header line
      throw ParseError(fmt::format("row {}: cannot parse numeric field '{}' ('{}')", line_no,
                                   schema.columns[bad_field].name,
                                   text::trim(fields[bad_field])),
                       line_no);
    }

    const auto label = schema.resolve_label(std::string(text::trim(fields[label_col])));
    if (!label) continue;
    if (label->empty()) throw ParseError(fmt::format("row {}: empty label", line_no), line_no);

    auto [cls, inserted] = class_lookup.try_emplace(*label, observed.size());
    if (inserted) observed.push_back(*label);
    ds.labels.push_back(cls->second);
    ds.numeric.insert(ds.numeric.end(), numeric_row.begin(), numeric_row.end());
    for (std::size_t i = 0; i < arity; ++i) {
      if (schema.columns[i].kind != ColumnKind::categorical) continue;
      const auto slot = column_slot[i];
      std::string value(text::trim(fields[i]));
      auto& col = ds.categorical[slot];
      auto [it, fresh] =
          vocab_index[slot].try_emplace(value, static_cast<std::uint32_t>(col.values.size()));
      if (fresh) col.values.push_back(std::move(value));
      col.codes.push_back(it->second);
    }
  }

  if (ds.labels.empty()) throw ParseError("no records");

  const auto remap = order_inventory(schema, observed, ds.normal_class);
  for (auto& c : ds.labels) c = remap[c];
  ds.class_names = std::move(observed);
  return ds;
}

RawDataset load_dataset(const std::filesystem::path& path, const Schema& schema) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open dataset '{}'", path.string()));
  try {
    return parse_dataset(in, schema);
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()), e.line());
  }
}

FeatureEncoder::FeatureEncoder(std::vector<FeatureEncoding> features)
    : features_(std::move(features)) {
  width_ = 0;
  for (auto& f : features_) {
    f.offset = width_;
    width_ += f.width();
  }
}

void FeatureEncoder::transform(const RawDataset& raw, std::size_t row,
                               std::span<double> out) const {
  for (const auto& f : features_) {
    if (f.kind == ColumnKind::numeric) {
      const double v = raw.numeric_cell(row, f.slot);
      const double range = f.max - f.min;
      double scaled = range > 0.0 ? (v - f.min) / range : 0.0;
      out[f.offset] = std::clamp(scaled, 0.0, 1.0);
    } else {
      std::fill_n(out.begin() + static_cast<std::ptrdiff_t>(f.offset), f.vocabulary.size(), 0.0);
      const auto& value = raw.categorical_cell(row, f.slot);
      const auto it = std::lower_bound(f.vocabulary.begin(), f.vocabulary.end(), value);
      if (it != f.vocabulary.end() && *it == value) {
        out[f.offset + static_cast<std::size_t>(it - f.vocabulary.begin())] = 1.0;
      }
    }
  }
}

FeatureEncoder fit_encoder(const RawDataset& raw, std::span<const std::size_t> fit_rows) {
  if (fit_rows.empty()) throw ConfigError("cannot fit encoder on an empty row set");
  std::vector<FeatureEncoding> encodings;
  for (const auto& col : raw.features) {
    FeatureEncoding enc;
    enc.name = col.name;
    enc.kind = col.kind;
    enc.slot = col.slot;
    if (col.kind == ColumnKind::numeric) {
      enc.min = enc.max = raw.numeric_cell(fit_rows.front(), col.slot);
      for (auto r : fit_rows) {
        const double v = raw.numeric_cell(r, col.slot);
        enc.min = std::min(enc.min, v);
        enc.max = std::max(enc.max, v);
      }
    } else {
      const auto& cat = raw.categorical[col.slot];
      std::vector<bool> seen(cat.values.size(), false);
      for (auto r : fit_rows) seen[cat.codes[r]] = true;
      for (std::size_t v = 0; v < seen.size(); ++v) {
        if (seen[v]) enc.vocabulary.push_back(cat.values[v]);
      }
      std::sort(enc.vocabulary.begin(), enc.vocabulary.end());
    }
    encodings.push_back(std::move(enc));
  }
  return FeatureEncoder(std::move(encodings));
}

ClassIndex EncodedDataset::class_index(std::string_view name) const {
  return find_class(class_names, name);
}

EncodedDataset encode(const RawDataset& raw, const FeatureEncoder& encoder) {
  EncodedDataset ds;
  ds.features.resize(static_cast<Eigen::Index>(raw.size()),
                     static_cast<Eigen::Index>(encoder.width()));
  for (std::size_t r = 0; r < raw.size(); ++r) {
    encoder.transform(raw, r,
                      std::span<double>(ds.features.row(static_cast<Eigen::Index>(r)).data(),
                                        encoder.width()));
  }
  ds.labels = raw.labels;
  ds.encoder = encoder;
  ds.class_names = raw.class_names;
  ds.normal_class = raw.normal_class;
  return ds;
}

EncodedDataset make_encoded(FeatureMatrix features, std::vector<ClassIndex> labels,
                            std::vector<std::string> class_names, ClassIndex normal_class) {
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw ConfigError("feature rows and labels differ in length");
  }
  for (auto c : labels) {
    if (c >= class_names.size()) throw ConfigError("label index out of range");
  }
  EncodedDataset ds;
  ds.features = std::move(features);
  ds.labels = std::move(labels);
  ds.class_names = std::move(class_names);
  ds.normal_class = normal_class;
  return ds;
}

}  // namespace oneshot
