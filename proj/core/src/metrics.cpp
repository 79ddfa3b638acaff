#include "oneshot/metrics.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "oneshot/error.hpp"

namespace oneshot {

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> class_names, ClassIndex normal_class)
    : names_(std::move(class_names)),
      normal_(normal_class),
      counts_(names_.size() * names_.size(), 0) {
  if (!names_.empty() && normal_ >= names_.size()) {
    throw ConfigError("normal class out of range");
  }
}

std::uint64_t ConfusionMatrix::row_total(ClassIndex truth) const {
  std::uint64_t sum = 0;
  for (std::size_t p = 0; p < size(); ++p) sum += at(truth, p);
  return sum;
}

std::uint64_t ConfusionMatrix::diagonal_total() const {
  std::uint64_t sum = 0;
  for (std::size_t c = 0; c < size(); ++c) sum += at(c, c);
  return sum;
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t sum = 0;
  for (auto v : counts_) sum += v;
  return sum;
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
  if (other.names_ != names_) throw ConfigError("cannot merge confusion matrices of different classes");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

const AttackRates& MetricsReport::attack(ClassIndex c) const {
  const auto it = std::find_if(attacks.begin(), attacks.end(),
                               [c](const AttackRates& r) { return r.class_index == c; });
  if (it == attacks.end()) throw ConfigError(fmt::format("class {} is not an attack class", c));
  return *it;
}

const AttackRates& MetricsReport::new_class() const {
  if (!excluded_class) throw ConfigError("no excluded class recorded");
  return attack(*excluded_class);
}

MetricsReport metrics(const ConfusionMatrix& cm, std::optional<ClassIndex> excluded_class) {
  const std::size_t n = cm.size();
  if (n < 2) throw ConfigError("confusion matrix needs at least two classes");
  if (excluded_class && (*excluded_class >= n || *excluded_class == cm.normal_class())) {
    throw ConfigError("excluded class must be an attack class of the matrix");
  }
  for (std::size_t c = 0; c < n; ++c) {
    if (cm.row_total(c) == 0) {
      throw ConfigError(fmt::format("confusion matrix row '{}' is empty", cm.class_names()[c]));
    }
  }

  MetricsReport r;
  r.class_names = cm.class_names();
  r.excluded_class = excluded_class;
  r.correct = cm.diagonal_total();
  r.total = cm.total();
  r.overall_accuracy = static_cast<double>(r.correct) / static_cast<double>(r.total);

  const ClassIndex normal = cm.normal_class();
  r.normal_class = normal;
  r.normal_total = cm.row_total(normal);
  r.true_negative = cm.at(normal, normal);
  r.false_positive = r.normal_total - r.true_negative;
  r.tnr = static_cast<double>(r.true_negative) / static_cast<double>(r.normal_total);
  r.fpr = static_cast<double>(r.false_positive) / static_cast<double>(r.normal_total);

  for (std::size_t c = 0; c < n; ++c) {
    if (c == normal) continue;
    AttackRates a;
    a.class_index = c;
    a.name = cm.class_names()[c];
    a.row_total = cm.row_total(c);
    a.true_positive = cm.at(c, c);
    a.false_negative = cm.at(c, normal);
    a.tpr = static_cast<double>(a.true_positive) / static_cast<double>(a.row_total);
    a.fnr = static_cast<double>(a.false_negative) / static_cast<double>(a.row_total);
    r.attacks.push_back(std::move(a));
  }
  return r;
}

}  // namespace oneshot
