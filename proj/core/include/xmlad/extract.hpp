#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "xmlad/schema.hpp"

namespace xmlad {

/// Scalar measurements of one element occurrence. Layout by abstract type:
///   Numerical   [value]
///   Date        [seconds since 1970-01-01T00:00:00Z]
///   Enumeration [index into enum_values]
///   String      [word_count, char_length]; raw text kept in `text`
/// A value that fails to parse keeps the layout width with NaN cells and
/// sets parse_failed.
struct MeasurementVector {
  std::vector<double> values;
  std::string text;
  bool parse_failed = false;

  bool operator==(const MeasurementVector&) const = default;
};

struct ComplexFeature {
  std::size_t descriptor_index = 0;
  std::vector<MeasurementVector> occurrences;

  bool operator==(const ComplexFeature&) const = default;
};

struct FeatureRow {
  std::string id;
  std::vector<ComplexFeature> features;  // one per descriptor, schema order
  std::size_t unknown_elements = 0;      // leaf elements/attributes not in the schema
  std::size_t stray_text = 0;            // containers carrying non-whitespace text

  std::size_t parse_failures() const;
  bool operator==(const FeatureRow&) const = default;
};

struct ExtractDiagnostic {
  std::string row_id;
  std::string message;

  bool operator==(const ExtractDiagnostic&) const = default;
};

struct FeatureMatrix {
  std::string schema_hash;
  std::size_t columns = 0;
  std::vector<FeatureRow> rows;
  std::vector<ExtractDiagnostic> diagnostics;

  bool operator==(const FeatureMatrix&) const = default;
};

struct CorpusDocument {
  std::string id;
  std::string text;
};

/// Number of characters (UTF-8 code points) in `text`.
std::size_t char_length(std::string_view text) noexcept;
/// Maximal runs of non-whitespace.
std::size_t word_count(std::string_view text) noexcept;

/// Parses ISO-8601 date, dateTime, time, gYear or gYearMonth lexical forms.
/// Returns false when the text is none of them.
bool parse_iso8601(std::string_view text, double& seconds) noexcept;

MeasurementVector measure_occurrence(std::string_view text_value, const ElementDescriptor& descriptor);

/// Throws Error(MalformedXml) for documents that are not well-formed.
FeatureRow extract_row(std::string_view xml_text, const SchemaVector& schema, std::string id = {});

/// Malformed documents are skipped and listed in diagnostics; throws
/// Error(EmptyCorpus) when no row survives.
FeatureMatrix build_feature_matrix(const std::vector<CorpusDocument>& corpus, const SchemaVector& schema);

/// A directory yields every *.xml file sorted by name; a regular file is read
/// as a newline-delimited manifest of paths (relative to the manifest).
std::vector<CorpusDocument> load_corpus(const std::filesystem::path& source);

std::string serialize_feature_matrix(const FeatureMatrix& matrix);
FeatureMatrix deserialize_feature_matrix(std::string_view content);

}  // namespace xmlad
