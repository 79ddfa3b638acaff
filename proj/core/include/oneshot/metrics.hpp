#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oneshot/dataset.hpp"

namespace oneshot {

/// N x N counts, rows = true class, columns = predicted class. The normal
/// class is row/column 0 in every matrix this library produces.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  ConfusionMatrix(std::vector<std::string> class_names, ClassIndex normal_class = 0);

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& class_names() const noexcept { return names_; }
  ClassIndex normal_class() const noexcept { return normal_; }

  std::uint64_t at(ClassIndex truth, ClassIndex predicted) const {
    return counts_[truth * names_.size() + predicted];
  }
  void set(ClassIndex truth, ClassIndex predicted, std::uint64_t value) {
    counts_[truth * names_.size() + predicted] = value;
  }
  void add(ClassIndex truth, ClassIndex predicted, std::uint64_t n = 1) {
    counts_[truth * names_.size() + predicted] += n;
  }

  std::uint64_t row_total(ClassIndex truth) const;
  std::uint64_t diagonal_total() const;
  std::uint64_t total() const;

  void merge(const ConfusionMatrix& other);

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::vector<std::string> names_;
  ClassIndex normal_ = 0;
  std::vector<std::uint64_t> counts_;
};

/// Detection rates of one attack class. FN counts the instances predicted as
/// normal; the denominator is the full row.
struct AttackRates {
  ClassIndex class_index = 0;
  std::string name;
  std::uint64_t true_positive = 0;
  std::uint64_t false_negative = 0;
  std::uint64_t row_total = 0;
  double tpr = 0.0;
  double fnr = 0.0;
};

struct MetricsReport {
  std::vector<std::string> class_names;
  std::uint64_t correct = 0;
  std::uint64_t total = 0;
  double overall_accuracy = 0.0;

  ClassIndex normal_class = 0;
  std::uint64_t true_negative = 0;
  std::uint64_t false_positive = 0;
  std::uint64_t normal_total = 0;
  double tnr = 0.0;
  double fpr = 0.0;

  std::vector<AttackRates> attacks;  // class order, normal skipped
  std::optional<ClassIndex> excluded_class;

  const AttackRates& attack(ClassIndex c) const;
  /// Rates of the excluded (new) class; throws if none was given.
  const AttackRates& new_class() const;
};

/// Overall accuracy is the diagonal mass over the grand total. Throws
/// ConfigError when a row is empty.
MetricsReport metrics(const ConfusionMatrix& cm, std::optional<ClassIndex> excluded_class = {});

}  // namespace oneshot
