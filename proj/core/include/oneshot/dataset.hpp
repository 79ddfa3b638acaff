#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "oneshot/schema.hpp"

namespace oneshot {

using ClassIndex = std::size_t;

/// Row-major so one instance is one contiguous row.
using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using FeatureVector = Eigen::VectorXd;

/// One input feature of a raw dataset. `slot` indexes the numeric cell block
/// or the categorical column list, depending on `kind`.
struct FeatureColumn {
  std::string name;
  ColumnKind kind = ColumnKind::numeric;
  std::size_t slot = 0;
};

struct CategoricalColumn {
  std::vector<std::string> values;  // in first-seen order
  std::vector<std::uint32_t> codes;  // per row, index into values
};

/// Parsed records before encoding.
///
/// The class inventory puts the normal class first, then classes listed in
/// the schema's `class_order`, then any other observed label in order of
/// first appearance.
struct RawDataset {
  Schema schema;
  std::vector<FeatureColumn> features;
  std::size_t numeric_width = 0;
  std::vector<double> numeric;  // row-major, rows x numeric_width
  std::vector<CategoricalColumn> categorical;
  std::vector<ClassIndex> labels;
  std::vector<std::string> class_names;
  ClassIndex normal_class = 0;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t num_classes() const noexcept { return class_names.size(); }
  std::vector<std::size_t> class_counts() const;
  ClassIndex class_index(std::string_view name) const;

  double numeric_cell(std::size_t row, std::size_t slot) const {
    return numeric[row * numeric_width + slot];
  }
  const std::string& categorical_cell(std::size_t row, std::size_t slot) const {
    const auto& col = categorical[slot];
    return col.values[col.codes[row]];
  }
};

RawDataset parse_dataset(std::istream& in, const Schema& schema);
RawDataset load_dataset(const std::filesystem::path& path, const Schema& schema);

/// Fitted per-feature transform: min-max scaling to [0,1] for numeric
/// columns, one-hot over a sorted vocabulary for categorical columns.
struct FeatureEncoding {
  std::string name;
  ColumnKind kind = ColumnKind::numeric;
  std::size_t slot = 0;
  std::size_t offset = 0;  // first encoded column
  double min = 0.0;
  double max = 0.0;
  std::vector<std::string> vocabulary;

  std::size_t width() const noexcept {
    return kind == ColumnKind::categorical ? vocabulary.size() : 1;
  }
};

class FeatureEncoder {
 public:
  FeatureEncoder() = default;
  explicit FeatureEncoder(std::vector<FeatureEncoding> features);

  std::size_t width() const noexcept { return width_; }
  const std::vector<FeatureEncoding>& features() const noexcept { return features_; }

  /// Writes the encoded row into `out` (size width()). Numeric values outside
  /// the fitted range clamp to [0,1]; unseen categories give an all-zero group.
  void transform(const RawDataset& raw, std::size_t row, std::span<double> out) const;

 private:
  std::vector<FeatureEncoding> features_;
  std::size_t width_ = 0;
};

/// Statistics come only from `fit_rows`.
FeatureEncoder fit_encoder(const RawDataset& raw, std::span<const std::size_t> fit_rows);

struct EncodedDataset {
  FeatureMatrix features;
  std::vector<ClassIndex> labels;
  FeatureEncoder encoder;
  std::vector<std::string> class_names;
  ClassIndex normal_class = 0;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t width() const noexcept { return static_cast<std::size_t>(features.cols()); }
  std::size_t num_classes() const noexcept { return class_names.size(); }
  ClassIndex class_index(std::string_view name) const;
};

EncodedDataset encode(const RawDataset& raw, const FeatureEncoder& encoder);

/// Builds an encoded dataset directly from a numeric matrix that is already
/// scaled. Used by tests and the synthetic generator.
EncodedDataset make_encoded(FeatureMatrix features, std::vector<ClassIndex> labels,
                            std::vector<std::string> class_names, ClassIndex normal_class = 0);

}  // namespace oneshot
