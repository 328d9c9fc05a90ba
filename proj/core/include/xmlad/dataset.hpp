#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace xmlad {

enum class Label { Normal, Anomalous };

std::string_view to_string(Label label) noexcept;
Label label_from_string(std::string_view text);

struct ColumnMeta {
  std::string path;       // element path the column aggregates ("" for row-level columns)
  std::string aggregate;  // "min", "max", "count", "sum=<value>", "tfidf=<term>", ...

  bool operator==(const ColumnMeta&) const = default;
};

/// Splits "path#aggregate" column names into ColumnMeta.
ColumnMeta column_meta_from_name(std::string_view name);

/// Rectangular numeric dataset; the learner input.
struct FlatDataset {
  std::vector<std::string> column_names;
  std::vector<ColumnMeta> column_meta;
  std::vector<std::vector<double>> rows;
  std::vector<Label> labels;  // empty when unlabeled, else one per row

  std::size_t size() const { return rows.size(); }
  std::size_t width() const { return column_names.size(); }
  bool labeled() const { return !labels.empty(); }

  /// Copies the given rows (and their labels) in the given order.
  FlatDataset subset(std::span<const std::size_t> indices) const;
  /// Rows labeled normal; every row when unlabeled.
  FlatDataset normal_rows() const;
  void check_rectangular() const;
};

/// Header row of column names plus an optional trailing "label" column
/// holding normal/anomalous. Cells use shortest round-trip formatting.
std::string write_csv(const FlatDataset& data);
FlatDataset read_csv(std::string_view text);

}  // namespace xmlad
