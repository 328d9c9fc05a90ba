#include "xmlad/flatten.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "xmlad/error.hpp"
#include "xmlad/textio.hpp"

namespace xmlad {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    std::string_view word = text.substr(start, i - start);
    while (!word.empty() && is_punct(word.front())) word.remove_prefix(1);
    while (!word.empty() && is_punct(word.back())) word.remove_suffix(1);
    if (word.empty()) continue;
    std::string token(word);
    for (char& c : token) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    tokens.push_back(std::move(token));
  }
  return tokens;
}

TokenCounts count_tokens(std::string_view text) {
  TokenCounts counts;
  for (auto& t : tokenize(text)) ++counts[t];
  return counts;
}

std::string row_text(const FeatureRow& row, const SchemaVector& schema) {
  std::string text;
  for (const auto& f : row.features) {
    if (schema[f.descriptor_index].abstract_type != AbstractType::String) continue;
    for (const auto& o : f.occurrences) {
      if (!text.empty()) text += ' ';
      text += o.text;
    }
  }
  return text;
}

double idf(std::size_t doc_frequency, std::size_t corpus_size) noexcept {
  return std::log((1.0 + static_cast<double>(corpus_size)) / (1.0 + static_cast<double>(doc_frequency))) + 1.0;
}

TfIdfDictionary build_dictionary(const FeatureMatrix& matrix, const SchemaVector& schema, std::size_t k) {
  if (k == 0) throw Error(Errc::UsageError, "tf-idf k must be at least 1");
  struct Stats {
    std::size_t df = 0;
    std::size_t tf = 0;
  };
  std::unordered_map<std::string, Stats> stats;
  for (const auto& row : matrix.rows) {
    for (const auto& [term, count] : count_tokens(row_text(row, schema))) {
      auto& s = stats[term];
      ++s.df;
      s.tf += count;
    }
  }
  const std::size_t m = matrix.rows.size();
  struct Scored {
    std::string term;
    std::size_t df;
    double score;
  };
  std::vector<Scored> scored;
  scored.reserve(stats.size());
  for (auto& [term, s] : stats) scored.push_back({term, s.df, static_cast<double>(s.tf) * idf(s.df, m)});
  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.term < b.term;
  });
  TfIdfDictionary dict;
  dict.k = k;
  dict.corpus_size = m;
  for (std::size_t i = 0; i < std::min(k, scored.size()); ++i) {
    dict.terms.push_back(std::move(scored[i].term));
    dict.doc_frequency.push_back(scored[i].df);
  }
  return dict;
}

double tfidf(std::string_view term, const TokenCounts& row_tokens, const TfIdfDictionary& dict) {
  auto it = row_tokens.find(term);
  if (it == row_tokens.end()) return 0.0;
  std::size_t df = 0;
  for (std::size_t i = 0; i < dict.terms.size(); ++i) {
    if (dict.terms[i] == term) {
      df = dict.doc_frequency[i];
      break;
    }
  }
  return static_cast<double>(it->second) * idf(df, dict.corpus_size);
}

std::size_t flat_width(const SchemaVector& schema, const TfIdfDictionary& dict) {
  std::size_t p = 0;
  for (const auto& d : schema.descriptors()) {
    switch (d.abstract_type) {
      case AbstractType::Numerical:
      case AbstractType::Date: p += 3; break;
      case AbstractType::Enumeration: p += d.enum_values.size(); break;
      case AbstractType::String: p += 5; break;
    }
  }
  return p + 1 + dict.terms.size();
}

std::vector<std::string> flat_column_names(const SchemaVector& schema, const TfIdfDictionary& dict) {
  std::vector<std::string> names;
  names.reserve(flat_width(schema, dict));
  for (const auto& d : schema.descriptors()) {
    switch (d.abstract_type) {
      case AbstractType::Numerical:
      case AbstractType::Date:
        for (const char* agg : {"min", "max", "count"}) names.push_back(d.path + "#" + agg);
        break;
      case AbstractType::Enumeration:
        for (const auto& v : d.enum_values) names.push_back(d.path + "#sum=" + v);
        break;
      case AbstractType::String:
        for (const char* agg : {"min_words", "max_words", "min_chars", "max_chars", "count"}) {
          names.push_back(d.path + "#" + agg);
        }
        break;
    }
  }
  names.push_back("#parse_failures");
  for (const auto& t : dict.terms) names.push_back("#tfidf=" + t);
  return names;
}

std::vector<double> flatten_row(const FeatureRow& row, const SchemaVector& schema, const TfIdfDictionary& dict) {
  if (row.features.size() != schema.size()) {
    throw Error(Errc::SchemaMismatch, "row '" + row.id + "' has " + std::to_string(row.features.size()) +
                                          " complex features, schema has " + std::to_string(schema.size()));
  }
  std::vector<double> out;
  out.reserve(flat_width(schema, dict));
  for (std::size_t i = 0; i < schema.size(); ++i) {
    const auto& d = schema[i];
    const auto& occ = row.features[i].occurrences;
    // min/max over the parseable occurrences of measurement `slot`
    auto min_max = [&](std::size_t slot) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (const auto& o : occ) {
        if (o.parse_failed) continue;
        lo = std::min(lo, o.values[slot]);
        hi = std::max(hi, o.values[slot]);
      }
      if (lo > hi) lo = hi = 0.0;
      return std::pair{lo, hi};
    };
    const double count = static_cast<double>(occ.size());
    switch (d.abstract_type) {
      case AbstractType::Numerical:
      case AbstractType::Date: {
        auto [lo, hi] = min_max(0);
        out.insert(out.end(), {lo, hi, count});
        break;
      }
      case AbstractType::Enumeration: {
        std::vector<double> sums(d.enum_values.size(), 0.0);
        for (const auto& o : occ) {
          if (!o.parse_failed) sums.at(static_cast<std::size_t>(o.values[0])) += 1.0;
        }
        out.insert(out.end(), sums.begin(), sums.end());
        break;
      }
      case AbstractType::String: {
        auto [wlo, whi] = min_max(0);
        auto [clo, chi] = min_max(1);
        out.insert(out.end(), {wlo, whi, clo, chi, count});
        break;
      }
    }
  }
  out.push_back(static_cast<double>(row.parse_failures()));
  if (!dict.terms.empty()) {
    TokenCounts tokens = count_tokens(row_text(row, schema));
    for (std::size_t t = 0; t < dict.terms.size(); ++t) {
      auto it = tokens.find(dict.terms[t]);
      double tf = it == tokens.end() ? 0.0 : static_cast<double>(it->second);
      out.push_back(tf * idf(dict.doc_frequency[t], dict.corpus_size));
    }
  }
  return out;
}

FlatDataset flatten_matrix(const FeatureMatrix& matrix, const SchemaVector& schema, const TfIdfDictionary& dict) {
  FlatDataset data;
  data.column_names = flat_column_names(schema, dict);
  for (const auto& name : data.column_names) data.column_meta.push_back(column_meta_from_name(name));
  data.rows.reserve(matrix.rows.size());
  for (const auto& row : matrix.rows) data.rows.push_back(flatten_row(row, schema, dict));
  return data;
}

std::string serialize_dictionary(const TfIdfDictionary& dict) {
  RecordWriter w("dict", 1);
  w.record("corpus_size", {std::to_string(dict.corpus_size)});
  w.record("k", {std::to_string(dict.k)});
  w.record("terms", {std::to_string(dict.terms.size())});
  for (std::size_t i = 0; i < dict.terms.size(); ++i) {
    w.record("t", {dict.terms[i], std::to_string(dict.doc_frequency[i])});
  }
  return w.finish();
}

TfIdfDictionary deserialize_dictionary(std::string_view content) {
  RecordReader r(content, "dict", 1);
  TfIdfDictionary dict;
  dict.corpus_size = r.expect("corpus_size").size(0);
  dict.k = r.expect("k").size(0);
  std::size_t n = r.expect("terms").size(0);
  for (std::size_t i = 0; i < n; ++i) {
    Record t = r.expect("t");
    dict.terms.push_back(t.at(0));
    dict.doc_frequency.push_back(t.size(1));
  }
  if (!r.done()) throw Error(Errc::CorruptFile, "trailing records in dictionary");
  return dict;
}

}  // namespace xmlad
