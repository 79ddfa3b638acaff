#include "oneshot/schema.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "oneshot/error.hpp"
#include "text.hpp"

namespace oneshot {

std::string_view to_string(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::numeric: return "numeric";
    case ColumnKind::categorical: return "categorical";
    case ColumnKind::label: return "label";
    case ColumnKind::ignore: return "ignore";
  }
  return "unknown";
}

ColumnKind parse_column_kind(std::string_view text) {
  if (text == "numeric") return ColumnKind::numeric;
  if (text == "categorical") return ColumnKind::categorical;
  if (text == "label") return ColumnKind::label;
  if (text == "ignore") return ColumnKind::ignore;
  throw ConfigError(fmt::format("unknown column kind '{}'", text));
}

std::size_t Schema::label_column() const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].kind == ColumnKind::label) return i;
  }
  throw ConfigError("schema declares no label column");
}

std::size_t Schema::feature_count() const {
  std::size_t n = 0;
  for (const auto& c : columns) {
    if (c.kind == ColumnKind::numeric || c.kind == ColumnKind::categorical) ++n;
  }
  return n;
}

std::optional<std::string> Schema::resolve_label(const std::string& raw) const {
  if (auto it = label_map.find(raw); it != label_map.end()) return it->second;
  if (drop_unmapped_labels) return std::nullopt;
  return raw;
}

void Schema::validate() const {
  std::size_t labels = 0;
  for (const auto& c : columns) {
    if (c.kind == ColumnKind::label) ++labels;
  }
  if (labels != 1) {
    throw ConfigError(
        fmt::format("schema must declare exactly one label column, found {}", labels));
  }
}

Schema Schema::all_numeric(std::size_t feature_count, std::string normal_class) {
  Schema s;
  s.name = "numeric";
  for (std::size_t i = 0; i < feature_count; ++i) {
    s.columns.push_back({fmt::format("f{}", i), ColumnKind::numeric});
  }
  s.columns.push_back({"label", ColumnKind::label});
  s.normal_class = std::move(normal_class);
  return s;
}

Schema parse_schema(std::istream& in) {
  Schema schema;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = text::strip_comment(raw);
    if (line.empty()) continue;
    std::string_view key, value;
    if (!text::split_key_value(line, key, value)) {
      throw ParseError(fmt::format("schema line {}: expected 'key = value'", line_no), line_no);
    }
    if (key == "name") {
      schema.name = std::string(value);
    } else if (key == "column") {
      const auto space = value.find_last_of(" \t");
      if (space == std::string_view::npos) {
        throw ParseError(fmt::format("schema line {}: expected '<name> <kind>'", line_no),
                         line_no);
      }
      ColumnDescriptor col;
      col.name = std::string(text::trim(value.substr(0, space)));
      try {
        col.kind = parse_column_kind(text::trim(value.substr(space + 1)));
      } catch (const ConfigError& e) {
        throw ParseError(fmt::format("schema line {}: {}", line_no, e.what()), line_no);
      }
      schema.columns.push_back(std::move(col));
    } else if (key == "normal_class") {
      schema.normal_class = std::string(value);
    } else if (key == "class_order") {
      schema.class_order = text::split_trimmed(value, ',');
    } else if (key == "map" || key == "reference_accuracy") {
      std::string_view lhs, rhs;
      if (!text::split_arrow(value, lhs, rhs) || lhs.empty() || rhs.empty()) {
        throw ParseError(fmt::format("schema line {}: expected '<from> -> <to>'", line_no),
                         line_no);
      }
      if (key == "map") {
        schema.label_map[std::string(lhs)] = std::string(rhs);
      } else {
        const auto acc = text::parse_double(rhs);
        if (!acc) {
          throw ParseError(fmt::format("schema line {}: bad accuracy '{}'", line_no, rhs),
                           line_no);
        }
        schema.reference_accuracy[std::string(lhs)] = *acc;
      }
    } else if (key == "unmapped_labels") {
      if (value == "keep") {
        schema.drop_unmapped_labels = false;
      } else if (value == "drop") {
        schema.drop_unmapped_labels = true;
      } else {
        throw ParseError(fmt::format("schema line {}: unmapped_labels must be keep or drop",
                                     line_no),
                         line_no);
      }
    } else {
      throw ParseError(fmt::format("schema line {}: unknown key '{}'", line_no, key), line_no);
    }
  }
  schema.validate();
  return schema;
}

Schema load_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open schema '{}'", path.string()));
  return parse_schema(in);
}

void write_schema(std::ostream& out, const Schema& schema) {
  if (!schema.name.empty()) out << "name = " << schema.name << '\n';
  if (!schema.normal_class.empty()) out << "normal_class = " << schema.normal_class << '\n';
  if (!schema.class_order.empty()) {
    out << "class_order = ";
    for (std::size_t i = 0; i < schema.class_order.size(); ++i) {
      out << (i ? ", " : "") << schema.class_order[i];
    }
    out << '\n';
  }
  if (schema.drop_unmapped_labels) out << "unmapped_labels = drop\n";
  for (const auto& c : schema.columns) {
    out << "column = " << c.name << ' ' << to_string(c.kind) << '\n';
  }
  for (const auto& [from, to] : schema.label_map) out << "map = " << from << " -> " << to << '\n';
  for (const auto& [cls, acc] : schema.reference_accuracy) {
    out << "reference_accuracy = " << cls << " -> " << acc << '\n';
  }
}

void save_schema(const std::filesystem::path& path, const Schema& schema) {
  std::ofstream out(path);
  if (!out) throw ConfigError(fmt::format("cannot write schema '{}'", path.string()));
  write_schema(out, schema);
}

}  // namespace oneshot
