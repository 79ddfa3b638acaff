#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace oneshot {

enum class ColumnKind { numeric, categorical, label, ignore };

std::string_view to_string(ColumnKind kind);
ColumnKind parse_column_kind(std::string_view text);

struct ColumnDescriptor {
  std::string name;
  ColumnKind kind = ColumnKind::numeric;
};

/// Column layout and label handling for one CSV dataset family.
///
/// Descriptor files are `key = value` lines; `#` starts a comment.
///
///   name               = free text
///   column             = <column name> <numeric|categorical|label|ignore>
///   normal_class       = <class name>
///   class_order        = <class>, <class>, ...
///   map                = <raw label> -> <class name>
///   unmapped_labels    = keep | drop
///   reference_accuracy = <excluded class> -> <overall accuracy, percent>
///
/// `column` lines are ordered and must declare exactly one label column.
struct Schema {
  std::string name;
  std::vector<ColumnDescriptor> columns;
  std::string normal_class;
  std::vector<std::string> class_order;
  std::map<std::string, std::string> label_map;
  bool drop_unmapped_labels = false;
  std::map<std::string, double> reference_accuracy;

  std::size_t label_column() const;
  std::size_t feature_count() const;

  /// Maps a raw label through `label_map`. Returns nullopt when the record
  /// should be dropped.
  std::optional<std::string> resolve_label(const std::string& raw) const;

  /// Throws ConfigError unless exactly one label column exists.
  void validate() const;

  /// All-numeric schema: `feature_count` columns named f0.. then `label`.
  static Schema all_numeric(std::size_t feature_count, std::string normal_class = {});
};

Schema parse_schema(std::istream& in);
Schema load_schema(const std::filesystem::path& path);
void write_schema(std::ostream& out, const Schema& schema);
void save_schema(const std::filesystem::path& path, const Schema& schema);

}  // namespace oneshot
