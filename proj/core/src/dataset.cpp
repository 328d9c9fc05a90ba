#include "xmlad/dataset.hpp"

#include <cmath>

#include "xmlad/error.hpp"
#include "xmlad/textio.hpp"

namespace xmlad {

std::string_view to_string(Label label) noexcept {
  return label == Label::Normal ? "normal" : "anomalous";
}

Label label_from_string(std::string_view text) {
  if (text == "normal" || text == "0") return Label::Normal;
  if (text == "anomalous" || text == "1") return Label::Anomalous;
  throw Error(Errc::CorruptFile, "unknown label '" + std::string(text) + "'");
}

ColumnMeta column_meta_from_name(std::string_view name) {
  // XML names cannot contain '#', so the first one ends the path.
  auto hash = name.find('#');
  if (hash == std::string_view::npos) return {std::string(name), ""};
  return {std::string(name.substr(0, hash)), std::string(name.substr(hash + 1))};
}

FlatDataset FlatDataset::subset(std::span<const std::size_t> indices) const {
  FlatDataset out;
  out.column_names = column_names;
  out.column_meta = column_meta;
  out.rows.reserve(indices.size());
  for (std::size_t i : indices) {
    out.rows.push_back(rows.at(i));
    if (labeled()) out.labels.push_back(labels.at(i));
  }
  return out;
}

FlatDataset FlatDataset::normal_rows() const {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!labeled() || labels[i] == Label::Normal) keep.push_back(i);
  }
  return subset(keep);
}

void FlatDataset::check_rectangular() const {
  for (const auto& r : rows) {
    if (r.size() != width()) throw Error(Errc::DimensionMismatch, "row width differs from column count");
  }
  if (labeled() && labels.size() != rows.size()) throw Error(Errc::DimensionMismatch, "label count differs from row count");
}

namespace {

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> current;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      current.push_back(std::move(field));
      field.clear();
      field_started = false;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      current.push_back(std::move(field));
      field.clear();
      field_started = false;
      records.push_back(std::move(current));
      current.clear();
    } else {
      field += c;
      field_started = true;
    }
  }
  if (quoted) throw Error(Errc::CorruptFile, "unterminated quoted CSV field");
  if (field_started || !current.empty()) {
    current.push_back(std::move(field));
    records.push_back(std::move(current));
  }
  return records;
}

}  // namespace

std::string write_csv(const FlatDataset& data) {
  data.check_rectangular();
  std::string out;
  for (std::size_t j = 0; j < data.column_names.size(); ++j) {
    if (j) out += ',';
    out += csv_field(data.column_names[j]);
  }
  if (data.labeled()) out += data.column_names.empty() ? "label" : ",label";
  out += '\n';
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    const auto& r = data.rows[i];
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (j) out += ',';
      out += format_double(r[j]);
    }
    if (data.labeled()) {
      if (!r.empty()) out += ',';
      out += to_string(data.labels[i]);
    }
    out += '\n';
  }
  return out;
}

FlatDataset read_csv(std::string_view text) {
  auto records = parse_csv(text);
  if (records.empty()) throw Error(Errc::CorruptFile, "CSV has no header row");
  FlatDataset data;
  auto header = std::move(records.front());
  bool has_label = !header.empty() && header.back() == "label";
  if (has_label) header.pop_back();
  data.column_names = std::move(header);
  for (const auto& name : data.column_names) data.column_meta.push_back(column_meta_from_name(name));
  const std::size_t expected = data.column_names.size() + (has_label ? 1 : 0);
  for (std::size_t i = 1; i < records.size(); ++i) {
    auto& rec = records[i];
    if (rec.size() == 1 && rec[0].empty() && expected != 1) continue;  // blank line
    if (rec.size() != expected) {
      throw Error(Errc::DimensionMismatch, "CSV row " + std::to_string(i) + " has " + std::to_string(rec.size()) +
                                               " fields, expected " + std::to_string(expected));
    }
    std::vector<double> row;
    row.reserve(data.column_names.size());
    for (std::size_t j = 0; j < data.column_names.size(); ++j) {
      double v = parse_double(rec[j]);
      if (!std::isfinite(v)) throw Error(Errc::NonFiniteData, "non-finite cell in CSV row " + std::to_string(i));
      row.push_back(v);
    }
    data.rows.push_back(std::move(row));
    if (has_label) data.labels.push_back(label_from_string(rec.back()));
  }
  return data;
}

}  // namespace xmlad
