#include "oneshot/report.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "oneshot/error.hpp"
#include "text.hpp"

namespace oneshot {
namespace {

nlohmann::ordered_json rates_json(const MetricsReport& r) {
  nlohmann::ordered_json j;
  j["overall_accuracy"] = r.overall_accuracy;
  j["correct"] = r.correct;
  j["total"] = r.total;
  j["normal"] = {{"class", r.class_names[r.normal_class]},
                 {"tnr", r.tnr},
                 {"fpr", r.fpr},
                 {"true_negative", r.true_negative},
                 {"false_positive", r.false_positive},
                 {"total", r.normal_total}};
  auto attacks = nlohmann::ordered_json::array();
  for (const auto& a : r.attacks) {
    attacks.push_back({{"class", a.name},
                       {"tpr", a.tpr},
                       {"fnr", a.fnr},
                       {"true_positive", a.true_positive},
                       {"false_negative", a.false_negative},
                       {"total", a.row_total}});
  }
  j["attacks"] = std::move(attacks);
  if (r.excluded_class) {
    const auto& nc = r.new_class();
    j["new_class"] = {{"class", nc.name}, {"tpr", nc.tpr}, {"fnr", nc.fnr}};
  }
  return j;
}

}  // namespace

std::string percent(double fraction) { return fmt::format("{:.2f}", fraction * 100.0); }

void write_cm_csv(std::ostream& out, const ConfusionMatrix& cm) {
  out << "class";
  for (const auto& name : cm.class_names()) out << ',' << name;
  out << '\n';
  for (std::size_t t = 0; t < cm.size(); ++t) {
    out << cm.class_names()[t];
    for (std::size_t p = 0; p < cm.size(); ++p) out << ',' << cm.at(t, p);
    out << '\n';
  }
}

ConfusionMatrix read_cm_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  std::vector<std::string> row_names;
  std::vector<std::vector<std::uint64_t>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto fields = text::split(line, ',');
    if (header.empty()) {
      if (fields.size() < 3) throw ParseError("confusion matrix needs at least two classes", line_no);
      for (std::size_t i = 1; i < fields.size(); ++i) header.emplace_back(text::trim(fields[i]));
      continue;
    }
    if (fields.size() != header.size() + 1) {
      throw ParseError(fmt::format("confusion matrix row {}: expected {} fields, got {}", line_no,
                                   header.size() + 1, fields.size()),
                       line_no);
    }
    row_names.emplace_back(text::trim(fields[0]));
    std::vector<std::uint64_t> counts;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      const auto v = text::parse_int<std::uint64_t>(fields[i]);
      if (!v) {
        throw ParseError(fmt::format("confusion matrix row {}: bad count '{}'", line_no,
                                     text::trim(fields[i])),
                         line_no);
      }
      counts.push_back(*v);
    }
    rows.push_back(std::move(counts));
  }
  if (header.empty()) throw ParseError("empty confusion matrix file");
  if (rows.size() != header.size()) {
    throw ParseError(fmt::format("confusion matrix has {} columns but {} rows", header.size(),
                                 rows.size()));
  }
  if (row_names != header) throw ParseError("confusion matrix row and column classes differ");

  ConfusionMatrix cm(header, 0);
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (std::size_t p = 0; p < rows.size(); ++p) cm.set(t, p, rows[t][p]);
  }
  return cm;
}

ConfusionMatrix load_cm_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open confusion matrix '{}'", path.string()));
  return read_cm_csv(in);
}

void write_cm_table(std::ostream& out, const ConfusionMatrix& cm) {
  const std::size_t n = cm.size();
  std::vector<std::vector<std::string>> cells(n + 1, std::vector<std::string>(n + 1));
  cells[0][0] = "true \\ predicted";
  for (std::size_t c = 0; c < n; ++c) {
    cells[0][c + 1] = cm.class_names()[c];
    cells[c + 1][0] = cm.class_names()[c];
  }
  for (std::size_t t = 0; t < n; ++t) {
    const auto row = cm.row_total(t);
    for (std::size_t p = 0; p < n; ++p) {
      const double frac = row ? static_cast<double>(cm.at(t, p)) / static_cast<double>(row) : 0.0;
      cells[t + 1][p + 1] = fmt::format("{} ({}%)", cm.at(t, p), percent(frac));
    }
  }
  std::vector<std::size_t> width(n + 1, 0);
  for (const auto& r : cells) {
    for (std::size_t c = 0; c <= n; ++c) width[c] = std::max(width[c], r[c].size());
  }
  for (const auto& r : cells) {
    for (std::size_t c = 0; c <= n; ++c) {
      out << (c ? "  " : "") << (c ? fmt::format("{:>{}}", r[c], width[c])
                                   : fmt::format("{:<{}}", r[c], width[c]));
    }
    out << '\n';
  }
  const double overall = cm.total() ? static_cast<double>(cm.diagonal_total()) /
                                          static_cast<double>(cm.total())
                                    : 0.0;
  out << "overall accuracy: " << percent(overall) << "%\n";
}

void write_metrics_text(std::ostream& out, const MetricsReport& r) {
  out << "overall_accuracy = " << percent(r.overall_accuracy) << '\n';
  out << "normal_tnr = " << percent(r.tnr) << '\n';
  out << "normal_fpr = " << percent(r.fpr) << '\n';
  for (const auto& a : r.attacks) {
    out << "tpr." << a.name << " = " << percent(a.tpr) << '\n';
    out << "fnr." << a.name << " = " << percent(a.fnr) << '\n';
  }
  if (r.excluded_class) {
    out << "new_class = " << r.new_class().name << '\n';
    out << "new_class_tpr = " << percent(r.new_class().tpr) << '\n';
    out << "new_class_fnr = " << percent(r.new_class().fnr) << '\n';
  }
}

std::string metrics_json(const MetricsReport& report, std::optional<std::size_t> votes,
                         const std::vector<SweepRow>* sweep) {
  nlohmann::ordered_json j;
  if (votes) j["votes"] = *votes;
  j["classes"] = report.class_names;
  const auto rates = rates_json(report);
  for (auto it = rates.begin(); it != rates.end(); ++it) j[it.key()] = it.value();
  if (sweep) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : *sweep) {
      auto entry = rates_json(row.metrics);
      entry["votes"] = row.votes;
      rows.push_back(std::move(entry));
    }
    j["sweep"] = std::move(rows);
  }
  return j.dump(2) + "\n";
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& sweep) {
  out << "votes,overall_accuracy,new_class_tpr,new_class_fnr,normal_tnr,normal_fpr\n";
  for (const auto& row : sweep) {
    const auto& m = row.metrics;
    const auto& nc = m.new_class();
    out << row.votes << ',' << percent(m.overall_accuracy) << ',' << percent(nc.tpr) << ','
        << percent(nc.fnr) << ',' << percent(m.tnr) << ',' << percent(m.fpr) << '\n';
  }
}

void write_sweep_table(std::ostream& out, const std::vector<SweepRow>& sweep) {
  if (sweep.empty()) return;
  const auto& name = sweep.front().metrics.new_class().name;
  out << fmt::format("{:>5}  {:>8}  {:>8}  {:>8}  {:>8}  {:>8}\n", "votes", "overall",
                     "new TPR", "new FNR", "TNR", "FPR");
  for (const auto& row : sweep) {
    const auto& m = row.metrics;
    out << fmt::format("{:>5}  {:>7}%  {:>7}%  {:>7}%  {:>7}%  {:>7}%\n", row.votes,
                       percent(m.overall_accuracy), percent(m.new_class().tpr),
                       percent(m.new_class().fnr), percent(m.tnr), percent(m.fpr));
  }
  out << "new class: " << name << '\n';
}

}  // namespace oneshot
