#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "oneshot/evaluator.hpp"
#include "oneshot/metrics.hpp"

namespace oneshot {

/// `class,<name>,...` header, then one `<name>,<count>,...` row per true
/// class. The first row is taken as the normal class when reading.
void write_cm_csv(std::ostream& out, const ConfusionMatrix& cm);
ConfusionMatrix read_cm_csv(std::istream& in);
ConfusionMatrix load_cm_csv(const std::filesystem::path& path);

/// Aligned table with counts and row percentages, plus the overall accuracy.
void write_cm_table(std::ostream& out, const ConfusionMatrix& cm);

/// Flat `key = value` record; rates in percent.
void write_metrics_text(std::ostream& out, const MetricsReport& report);
std::string metrics_json(const MetricsReport& report, std::optional<std::size_t> votes = {},
                         const std::vector<SweepRow>* sweep = nullptr);

/// votes, overall accuracy, new-class TPR/FNR, normal TNR/FPR (percent).
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& sweep);
void write_sweep_table(std::ostream& out, const std::vector<SweepRow>& sweep);

/// Percent with two decimals, e.g. "76.67".
std::string percent(double fraction);

}  // namespace oneshot
