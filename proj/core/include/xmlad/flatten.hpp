#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "xmlad/dataset.hpp"
#include "xmlad/extract.hpp"
#include "xmlad/schema.hpp"

namespace xmlad {

inline constexpr std::size_t kDefaultTfIdfK = 10;

struct TfIdfDictionary {
  std::vector<std::string> terms;           // descending selection score, then lexicographic
  std::vector<std::size_t> doc_frequency;   // parallel to terms
  std::size_t corpus_size = 0;
  std::size_t k = kDefaultTfIdfK;

  bool operator==(const TfIdfDictionary&) const = default;
};

using TokenCounts = std::map<std::string, std::size_t, std::less<>>;

/// Lowercased, whitespace-split tokens with leading/trailing ASCII punctuation
/// removed; tokens that end up empty are dropped.
std::vector<std::string> tokenize(std::string_view text);
TokenCounts count_tokens(std::string_view text);

/// Concatenated text of every String occurrence in the row, space-joined.
std::string row_text(const FeatureRow& row, const SchemaVector& schema);

/// Smoothed inverse document frequency: ln((1 + m) / (1 + df)) + 1.
double idf(std::size_t doc_frequency, std::size_t corpus_size) noexcept;

/// Selects the k terms with the largest summed TF-IDF over the training rows.
TfIdfDictionary build_dictionary(const FeatureMatrix& matrix, const SchemaVector& schema, std::size_t k);

/// Raw term count in the row times idf. Terms outside the dictionary use df = 0.
double tfidf(std::string_view term, const TokenCounts& row_tokens, const TfIdfDictionary& dict);

/// p = 3 per Numerical/Date + |enum_values| per Enumeration + 5 per String + 1 + k.
std::size_t flat_width(const SchemaVector& schema, const TfIdfDictionary& dict);
std::vector<std::string> flat_column_names(const SchemaVector& schema, const TfIdfDictionary& dict);

/// Throws Error(SchemaMismatch) when the row does not have one complex
/// feature per descriptor.
std::vector<double> flatten_row(const FeatureRow& row, const SchemaVector& schema, const TfIdfDictionary& dict);

FlatDataset flatten_matrix(const FeatureMatrix& matrix, const SchemaVector& schema, const TfIdfDictionary& dict);

std::string serialize_dictionary(const TfIdfDictionary& dict);
TfIdfDictionary deserialize_dictionary(std::string_view content);

}  // namespace xmlad
