#include "xmlad/generate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>

#include "xmlad/error.hpp"
#include "xmlad/extract.hpp"
#include "xmlad/rng.hpp"
#include "xmlad/xml.hpp"

namespace xmlad {

namespace {

using nlohmann::json;

std::tuple<std::int64_t, unsigned, unsigned> civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return {y + (m <= 2), m, d};
}

bool integral_type(std::string_view xsd_type) {
  const auto t = xml::strip_prefix(xsd_type);
  return t == "int" || t == "integer" || t == "long" || t == "short" || t == "byte" ||
         t.find("Integer") != std::string_view::npos || t.starts_with("unsigned");
}

[[noreturn]] void missing(const std::string& path, const std::string& what) {
  throw Error(Errc::MissingParams, path + ": " + what);
}

double date_seconds(const json& value, const std::string& path) {
  if (value.is_number()) return value.get<double>();
  double s = 0.0;
  if (!value.is_string() || !parse_iso8601(value.get<std::string>(), s)) missing(path, "bad date bound");
  return s;
}

std::pair<std::size_t, std::size_t> range(const json& value, const std::string& path) {
  if (!value.is_array() || value.size() != 2 || !value[0].is_number_unsigned() || !value[1].is_number_unsigned()) {
    missing(path, "expected a [low, high] pair of non-negative integers");
  }
  const auto lo = value[0].get<std::size_t>();
  const auto hi = value[1].get<std::size_t>();
  if (lo > hi) missing(path, "range low exceeds high");
  return {lo, hi};
}

void require_usable(const ElementDescriptor& d, const ElementParams& p) {
  switch (d.abstract_type) {
    case AbstractType::Numerical:
      if (!p.mean || !(p.stddev >= 0.0)) missing(d.path, "numerical element needs mean and stddev >= 0");
      break;
    case AbstractType::Enumeration: {
      if (p.weights.size() != d.enum_values.size()) missing(d.path, "enumeration weights do not match the values");
      double total = 0.0;
      for (double w : p.weights) {
        if (!(w >= 0.0)) missing(d.path, "negative enumeration weight");
        total += w;
      }
      if (!(total > 0.0)) missing(d.path, "enumeration weights sum to zero");
      break;
    }
    case AbstractType::String:
      if (p.vocabulary.empty() || p.min_words == 0 || p.min_words > p.max_words) {
        missing(d.path, "string element needs a vocabulary and 1 <= min words <= max words");
      }
      break;
    case AbstractType::Date:
      if (!p.start || !p.end || *p.start > *p.end) missing(d.path, "date element needs start <= end");
      break;
  }
  if (p.min_count > p.max_count) missing(d.path, "count low exceeds high");
}

std::string generate_value(const ElementDescriptor& d, const ElementParams& p, Rng& rng) {
  switch (d.abstract_type) {
    case AbstractType::Numerical: {
      double v = rng.normal(*p.mean, p.stddev);
      if (p.min) v = std::max(v, *p.min);
      if (p.max) v = std::min(v, *p.max);
      if (integral_type(d.xsd_type) || p.decimals <= 0) return std::to_string(std::llround(v));
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.*f", p.decimals, v);
      return buf;
    }
    case AbstractType::Enumeration:
      return d.enum_values[rng.weighted(p.weights)];
    case AbstractType::String: {
      const std::size_t words = p.min_words + rng.below(p.max_words - p.min_words + 1);
      std::string out;
      for (std::size_t i = 0; i < words; ++i) {
        if (i) out.push_back(' ');
        out += p.vocabulary[rng.below(p.vocabulary.size())];
      }
      return out;
    }
    case AbstractType::Date: {
      const auto t = xml::strip_prefix(d.xsd_type);
      const bool with_time = t == "dateTime";
      double s = rng.uniform(*p.start, *p.end);
      s = with_time ? std::floor(s) : std::floor(s / 86400.0) * 86400.0;
      if (t == "gYear") return std::to_string(std::get<0>(civil_from_days(static_cast<std::int64_t>(s / 86400.0))));
      return format_date(s, with_time);
    }
  }
  return {};
}

// Element tree implied by the descriptor paths, children in first-seen order.
struct Shape {
  struct Node {
    std::string path;
    std::string name;
    std::optional<std::size_t> descriptor;
    std::vector<std::size_t> attributes;  // descriptor indices
    std::vector<std::size_t> children;    // node indices
  };
  std::vector<Node> nodes;
  std::map<std::string, std::size_t, std::less<>> by_path;

  std::size_t node(const std::string& path) {
    if (auto it = by_path.find(path); it != by_path.end()) return it->second;
    const auto slash = path.rfind('/');
    std::optional<std::size_t> parent;
    if (slash != 0 && slash != std::string::npos) parent = node(path.substr(0, slash));
    nodes.push_back({path, path.substr(slash + 1), std::nullopt, {}, {}});
    const std::size_t id = nodes.size() - 1;
    by_path.emplace(path, id);
    if (parent) nodes[*parent].children.push_back(id);
    return id;
  }

  explicit Shape(const SchemaVector& schema) {
    for (std::size_t i = 0; i < schema.size(); ++i) {
      const auto& path = schema[i].path;
      if (const auto at = path.find("/@"); at != std::string::npos) {
        nodes[node(path.substr(0, at))].attributes.push_back(i);
      } else {
        nodes[node(path)].descriptor = i;
      }
    }
  }
};

class Generator {
 public:
  Generator(const SchemaVector& schema, const GenerationParams& params) : schema_(schema), params_(params), shape_(schema) {
    for (const auto& d : schema.descriptors()) require_usable(d, element(d.path));
    for (const auto& n : shape_.nodes) {
      if (n.path.find('/', 1) == std::string::npos) roots_.push_back(&n - shape_.nodes.data());
    }
    if (roots_.empty()) throw Error(Errc::MissingParams, "schema has no elements to generate");
  }

  std::string document(Rng& rng) const {
    xml::Document doc;
    build(shape_.nodes[roots_.front()], doc.root, rng);
    return xml::serialize(doc);
  }

 private:
  const ElementParams& element(const std::string& path) const {
    auto it = params_.elements.find(path);
    if (it == params_.elements.end()) missing(path, "no generation parameters");
    return it->second;
  }

  std::size_t occurrences(const Shape::Node& n, Rng& rng) const {
    std::size_t lo = 1, hi = 1;
    if (n.descriptor) {
      const auto& p = element(n.path);
      lo = p.min_count;
      hi = p.max_count;
    } else if (auto it = params_.repeat.find(n.path); it != params_.repeat.end()) {
      std::tie(lo, hi) = it->second;
    }
    return lo + rng.below(hi - lo + 1);
  }

  void build(const Shape::Node& n, xml::Element& e, Rng& rng) const {
    e.qname = n.name;
    for (std::size_t a : n.attributes) {
      e.attributes.push_back({schema_[a].name, generate_value(schema_[a], element(schema_[a].path), rng)});
    }
    if (n.descriptor) {
      e.children.emplace_back(xml::NodeKind::Text,
                              generate_value(schema_[*n.descriptor], element(n.path), rng));
    }
    for (std::size_t c : n.children) {
      const auto& child = shape_.nodes[c];
      const std::size_t k = occurrences(child, rng);
      for (std::size_t i = 0; i < k; ++i) {
        xml::Element ce;
        build(child, ce, rng);
        e.children.emplace_back(std::move(ce));
      }
    }
  }

  const SchemaVector& schema_;
  const GenerationParams& params_;
  Shape shape_;
  std::vector<std::size_t> roots_;
};

}  // namespace

std::string format_date(double seconds, bool with_time) {
  const auto total = static_cast<std::int64_t>(std::floor(seconds));
  std::int64_t days = total / 86400;
  std::int64_t tod = total % 86400;
  if (tod < 0) {
    tod += 86400;
    --days;
  }
  const auto [y, m, d] = civil_from_days(days);
  char buf[64];
  if (with_time) {
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lld", static_cast<long long>(y), m, d,
                  static_cast<long long>(tod / 3600), static_cast<long long>(tod / 60 % 60),
                  static_cast<long long>(tod % 60));
  } else {
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02u", static_cast<long long>(y), m, d);
  }
  return buf;
}

GenerationParams parse_generation_params(std::string_view json_text, const SchemaVector& schema) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(Errc::MissingParams, std::string("generation parameters are not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw Error(Errc::MissingParams, "generation parameters must be a JSON object");

  std::map<std::string, std::vector<std::string>> vocabularies;
  if (auto it = root.find("vocabularies"); it != root.end()) {
    for (const auto& [name, words] : it->items()) vocabularies[name] = words.get<std::vector<std::string>>();
  }

  GenerationParams params;
  if (auto it = root.find("repeat"); it != root.end()) {
    for (const auto& [path, value] : it->items()) params.repeat[path] = range(value, path);
  }
  const json elements = root.value("elements", json::object());
  for (const auto& [path, spec] : elements.items()) {
    const auto idx = schema.find(path);
    if (!idx) missing(path, "not a schema descriptor");
    const auto& d = schema[*idx];
    ElementParams p;
    try {
      if (spec.contains("mean")) p.mean = spec["mean"].get<double>();
      p.stddev = spec.value("stddev", 0.0);
      p.decimals = spec.value("decimals", 2);
      if (spec.contains("min")) p.min = spec["min"].get<double>();
      if (spec.contains("max")) p.max = spec["max"].get<double>();
      if (spec.contains("weights")) {
        p.weights.assign(d.enum_values.size(), 0.0);
        for (const auto& [value, w] : spec["weights"].items()) {
          auto pos = std::find(d.enum_values.begin(), d.enum_values.end(), value);
          if (pos == d.enum_values.end()) missing(path, "weight for unknown value '" + value + "'");
          p.weights[static_cast<std::size_t>(pos - d.enum_values.begin())] = w.get<double>();
        }
      }
      if (spec.contains("vocabulary")) {
        const auto& v = spec["vocabulary"];
        if (v.is_string()) {
          auto named = vocabularies.find(v.get<std::string>());
          if (named == vocabularies.end()) missing(path, "unknown vocabulary '" + v.get<std::string>() + "'");
          p.vocabulary = named->second;
        } else {
          p.vocabulary = v.get<std::vector<std::string>>();
        }
      }
      if (spec.contains("words")) std::tie(p.min_words, p.max_words) = range(spec["words"], path);
      if (spec.contains("start")) p.start = date_seconds(spec["start"], path);
      if (spec.contains("end")) p.end = date_seconds(spec["end"], path);
      if (spec.contains("count")) std::tie(p.min_count, p.max_count) = range(spec["count"], path);
    } catch (const json::exception& e) {
      missing(path, e.what());
    }
    params.elements[path] = std::move(p);
  }
  return params;
}

GenerationParams default_generation_params(const SchemaVector& schema) {
  static const std::vector<std::string> kWords = {"alpha", "bravo",  "charlie", "delta", "echo",
                                                  "foxtrot", "golf", "hotel",   "india", "juliet"};
  GenerationParams params;
  for (const auto& d : schema.descriptors()) {
    ElementParams p;
    switch (d.abstract_type) {
      case AbstractType::Numerical:
        p.mean = 100.0;
        p.stddev = 15.0;
        break;
      case AbstractType::Enumeration:
        p.weights.assign(d.enum_values.size(), 1.0);
        break;
      case AbstractType::String:
        p.vocabulary = kWords;
        p.min_words = 1;
        p.max_words = 3;
        break;
      case AbstractType::Date:
        p.start = 1577836800.0;  // 2020-01-01
        p.end = 1703980800.0;    // 2023-12-31
        break;
    }
    params.elements[d.path] = std::move(p);
  }
  return params;
}

std::vector<std::string> generate_normal_corpus(const SchemaVector& schema, const GenerationParams& params,
                                                std::size_t count, std::uint64_t seed) {
  if (count == 0) return {};
  const Generator gen(schema, params);
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, i));
    out.push_back(gen.document(rng));
  }
  return out;
}

}  // namespace xmlad
