#pragma once

// Synthetic normal-corpus generator driven by per-element distributions.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xmlad/schema.hpp"

namespace xmlad {

struct ElementParams {
  // Numerical: normal(mean, stddev), clamped to [min, max], rounded to
  // `decimals` places (integral xsd types always round to integers).
  std::optional<double> mean;
  double stddev = 0.0;
  int decimals = 2;
  std::optional<double> min;
  std::optional<double> max;
  // Enumeration: one weight per enum value, in schema order.
  std::vector<double> weights;
  // String: words drawn uniformly from the vocabulary.
  std::vector<std::string> vocabulary;
  std::size_t min_words = 1;
  std::size_t max_words = 1;
  // Date: uniform seconds since the epoch in [start, end].
  std::optional<double> start;
  std::optional<double> end;
  // Occurrences per parent, uniform in [min_count, max_count].
  std::size_t min_count = 1;
  std::size_t max_count = 1;
};

struct GenerationParams {
  std::map<std::string, ElementParams, std::less<>> elements;               // by descriptor path
  std::map<std::string, std::pair<std::size_t, std::size_t>, std::less<>> repeat;  // container path -> count range
};

/// JSON layout:
///   {"elements": {"/Root/Qty": {"mean": 5, "stddev": 2, "decimals": 0, "min": 1},
///                 "/Root/Kind": {"weights": {"a": 3, "b": 1}},
///                 "/Root/Note": {"vocabulary": ["x", "y"] | "<name>", "words": [1, 4]},
///                 "/Root/Day": {"start": "2020-01-01", "end": "2020-12-31", "count": [1, 2]}},
///    "repeat": {"/Root/Line": [1, 5]},
///    "vocabularies": {"<name>": ["..."]}}
/// Enumeration weights not listed default to 0. Throws MissingParams on
/// malformed entries.
GenerationParams parse_generation_params(std::string_view json_text, const SchemaVector& schema);

/// Plain defaults for every descriptor: normal(100, 15) numbers, uniform
/// enumerations, short strings over a fixed vocabulary, dates in 2020-2023.
GenerationParams default_generation_params(const SchemaVector& schema);

/// Document i uses a generator seeded by derive_seed(seed, i). Throws
/// MissingParams when a descriptor has no usable parameters.
std::vector<std::string> generate_normal_corpus(const SchemaVector& schema, const GenerationParams& params,
                                                std::size_t count, std::uint64_t seed);

/// ISO 8601 "YYYY-MM-DD" or "YYYY-MM-DDThh:mm:ss" (UTC) for epoch seconds.
std::string format_date(double seconds, bool with_time);

}  // namespace xmlad
