#include "xmlad/extract.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "xmlad/error.hpp"
#include "xmlad/textio.hpp"
#include "xmlad/xml.hpp"

namespace xmlad {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool has_non_space(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return !is_space(c); });
}

bool parse_number(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

// Days since 1970-01-01 in the proleptic Gregorian calendar.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

bool is_leap(std::int64_t y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

unsigned days_in_month(std::int64_t y, unsigned m) {
  static constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && is_leap(y) ? 29 : kDays[m - 1];
}

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}
  bool done() const { return pos_ == s_.size(); }
  bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }
  bool take(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }
  bool digits(std::size_t n, std::int64_t& out) {
    if (pos_ + n > s_.size()) return false;
    out = 0;
    for (std::size_t i = 0; i < n; ++i) {
      char c = s_[pos_ + i];
      if (c < '0' || c > '9') return false;
      out = out * 10 + (c - '0');
    }
    pos_ += n;
    return true;
  }
  // Year: at least four digits.
  bool year(std::int64_t& out) {
    std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') ++pos_;
    if (pos_ - start < 4) return false;
    out = 0;
    for (std::size_t i = start; i < pos_; ++i) out = out * 10 + (s_[i] - '0');
    return true;
  }
  bool fraction(double& out) {
    out = 0;
    if (!take('.')) return true;
    double scale = 0.1;
    std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') {
      out += scale * (s_[pos_] - '0');
      scale /= 10;
      ++pos_;
    }
    return pos_ > start;
  }
  // Optional Z or +hh:mm / -hh:mm; returns the offset in seconds.
  bool timezone(std::int64_t& offset) {
    offset = 0;
    if (done()) return true;
    if (take('Z')) return done();
    int sign = 0;
    if (take('+')) sign = 1;
    else if (take('-')) sign = -1;
    else return false;
    std::int64_t hh = 0, mm = 0;
    if (!digits(2, hh) || !take(':') || !digits(2, mm) || hh > 14 || mm > 59) return false;
    offset = sign * (hh * 3600 + mm * 60);
    return done();
  }
  bool time_of_day(double& seconds) {
    std::int64_t hh = 0, mm = 0, ss = 0;
    double frac = 0;
    if (!digits(2, hh) || !take(':') || !digits(2, mm) || !take(':') || !digits(2, ss) || !fraction(frac)) {
      return false;
    }
    if (hh > 24 || mm > 59 || ss > 60 || (hh == 24 && (mm != 0 || ss != 0 || frac != 0))) return false;
    seconds = static_cast<double>(hh * 3600 + mm * 60 + ss) + frac;
    return true;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

bool parse_iso8601(std::string_view text, double& seconds) noexcept {
  text = trim(text);
  if (text.empty()) return false;

  // xs:time
  if (text.size() >= 8 && text[2] == ':') {
    Cursor c(text);
    double tod = 0;
    std::int64_t tz = 0;
    if (!c.time_of_day(tod) || !c.timezone(tz)) return false;
    seconds = tod - static_cast<double>(tz);
    return true;
  }

  Cursor c(text);
  bool negative = c.take('-');
  std::int64_t year = 0, month = 1, day = 1;
  if (!c.year(year)) return false;
  if (negative) year = -year;
  double tod = 0;
  if (c.take('-')) {
    if (!c.digits(2, month) || month < 1 || month > 12) return false;
    if (c.take('-')) {
      if (!c.digits(2, day) || day < 1 || day > days_in_month(year, static_cast<unsigned>(month))) return false;
      if (c.take('T') && !c.time_of_day(tod)) return false;
    }
  }
  std::int64_t tz = 0;
  if (!c.timezone(tz)) return false;
  std::int64_t days = days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
  seconds = static_cast<double>(days) * 86400.0 + tod - static_cast<double>(tz);
  return true;
}

std::size_t char_length(std::string_view text) noexcept {
  std::size_t n = 0;
  for (unsigned char c : text) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::size_t word_count(std::string_view text) noexcept {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : text) {
    if (is_space(c)) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++n;
    }
  }
  return n;
}

std::size_t FeatureRow::parse_failures() const {
  std::size_t n = stray_text;
  for (const auto& f : features) {
    for (const auto& o : f.occurrences) n += o.parse_failed ? 1 : 0;
  }
  return n;
}

MeasurementVector measure_occurrence(std::string_view text_value, const ElementDescriptor& descriptor) {
  MeasurementVector mv;
  switch (descriptor.abstract_type) {
    case AbstractType::Numerical: {
      double v = 0;
      if (parse_number(text_value, v)) {
        mv.values = {v};
      } else {
        mv.values = {kNaN};
        mv.parse_failed = true;
      }
      break;
    }
    case AbstractType::Date: {
      double secs = 0;
      if (parse_iso8601(text_value, secs)) {
        mv.values = {secs};
      } else {
        mv.values = {kNaN};
        mv.parse_failed = true;
      }
      break;
    }
    case AbstractType::Enumeration: {
      std::string_view literal = trim(text_value);
      if (descriptor.xsd_type == "boolean") {
        if (literal == "1") literal = "true";
        if (literal == "0") literal = "false";
      }
      const auto& values = descriptor.enum_values;
      auto it = std::find(values.begin(), values.end(), literal);
      if (it == values.end()) {
        mv.values = {kNaN};
        mv.parse_failed = true;
      } else {
        mv.values = {static_cast<double>(it - values.begin())};
      }
      break;
    }
    case AbstractType::String:
      mv.values = {static_cast<double>(word_count(text_value)), static_cast<double>(char_length(text_value))};
      mv.text = std::string(text_value);
      break;
  }
  return mv;
}

namespace {

bool is_namespace_attribute(std::string_view qname) {
  return qname == "xmlns" || qname.substr(0, 6) == "xmlns:" || qname.substr(0, 4) == "xsi:" ||
         qname.substr(0, 4) == "xml:";
}

class RowExtractor {
 public:
  RowExtractor(const SchemaVector& schema, FeatureRow& row) : schema_(schema), row_(row) {
    for (const auto& d : schema.descriptors()) {
      std::string_view p = d.path;
      for (auto pos = p.find('/', 1); pos != std::string_view::npos; pos = p.find('/', pos + 1)) {
        containers_.insert(std::string(p.substr(0, pos)));
      }
    }
  }

  void walk(const xml::Element& e, const std::string& parent_path) {
    std::string path = parent_path + "/" + std::string(e.local_name());
    auto idx = schema_.find(path);
    bool has_children = e.has_element_children();
    if (idx) {
      add(*idx, e.text());
    } else if (!has_children) {
      if (!containers_.count(path)) ++row_.unknown_elements;
    } else if (has_non_space(e.text())) {
      ++row_.stray_text;
    }
    for (const auto& a : e.attributes) {
      if (is_namespace_attribute(a.qname)) continue;
      std::string apath = path + "/@" + std::string(xml::strip_prefix(a.qname));
      if (auto aidx = schema_.find(apath)) {
        add(*aidx, a.value);
      } else {
        ++row_.unknown_elements;
      }
    }
    for (const auto* c : e.child_elements()) walk(*c, path);
  }

 private:
  void add(std::size_t idx, std::string_view text) {
    row_.features[idx].occurrences.push_back(measure_occurrence(text, schema_[idx]));
  }

  const SchemaVector& schema_;
  FeatureRow& row_;
  std::unordered_set<std::string> containers_;
};

}  // namespace

FeatureRow extract_row(std::string_view xml_text, const SchemaVector& schema, std::string id) {
  xml::Document doc = xml::parse(xml_text);
  FeatureRow row;
  row.id = std::move(id);
  row.features.resize(schema.size());
  for (std::size_t i = 0; i < schema.size(); ++i) row.features[i].descriptor_index = i;
  RowExtractor(schema, row).walk(doc.root, "");
  return row;
}

FeatureMatrix build_feature_matrix(const std::vector<CorpusDocument>& corpus, const SchemaVector& schema) {
  FeatureMatrix fm;
  fm.schema_hash = schema.source_hash();
  fm.columns = schema.size();
  for (const auto& doc : corpus) {
    try {
      fm.rows.push_back(extract_row(doc.text, schema, doc.id));
    } catch (const Error& e) {
      if (e.code() != Errc::MalformedXml) throw;
      fm.diagnostics.push_back({doc.id, e.what()});
    }
  }
  if (fm.rows.empty()) {
    throw Error(Errc::EmptyCorpus, corpus.empty() ? "corpus is empty" : "every document in the corpus is malformed");
  }
  return fm;
}

std::vector<CorpusDocument> load_corpus(const std::filesystem::path& source) {
  namespace fs = std::filesystem;
  std::vector<CorpusDocument> docs;
  if (fs::is_directory(source)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(source)) {
      if (entry.is_regular_file() && entry.path().extension() == ".xml") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) docs.push_back({f.filename().string(), read_file(f)});
    return docs;
  }
  std::string manifest = read_file(source);
  fs::path base = source.parent_path();
  std::size_t pos = 0;
  while (pos < manifest.size()) {
    auto eol = manifest.find('\n', pos);
    std::string line(trim(std::string_view(manifest).substr(pos, eol == std::string::npos ? manifest.npos : eol - pos)));
    pos = eol == std::string::npos ? manifest.size() : eol + 1;
    if (line.empty() || line.front() == '#') continue;
    fs::path p(line);
    docs.push_back({line, read_file(p.is_absolute() ? p : base / p)});
  }
  return docs;
}

std::string serialize_feature_matrix(const FeatureMatrix& matrix) {
  RecordWriter w("fm", 1);
  w.record("schema_hash", {matrix.schema_hash});
  w.record("columns", {std::to_string(matrix.columns)});
  w.record("rows", {std::to_string(matrix.rows.size())});
  for (const auto& row : matrix.rows) {
    w.record("row", {row.id, std::to_string(row.unknown_elements), std::to_string(row.stray_text)});
    for (const auto& f : row.features) {
      if (f.occurrences.empty()) continue;
      std::vector<std::string> fields = {std::to_string(f.descriptor_index), std::to_string(f.occurrences.size())};
      for (const auto& o : f.occurrences) {
        fields.push_back(o.parse_failed ? "1" : "0");
        fields.push_back(o.text);
        fields.push_back(std::to_string(o.values.size()));
        for (double v : o.values) fields.push_back(format_double(v));
      }
      w.record("f", fields);
    }
  }
  w.record("diagnostics", {std::to_string(matrix.diagnostics.size())});
  for (const auto& d : matrix.diagnostics) w.record("diag", {d.row_id, d.message});
  return w.finish();
}

FeatureMatrix deserialize_feature_matrix(std::string_view content) {
  RecordReader r(content, "fm", 1);
  FeatureMatrix fm;
  fm.schema_hash = r.expect("schema_hash").at(0);
  fm.columns = r.expect("columns").size(0);
  std::size_t m = r.expect("rows").size(0);
  for (std::size_t i = 0; i < m; ++i) {
    Record rr = r.expect("row");
    FeatureRow row;
    row.id = rr.at(0);
    row.unknown_elements = rr.size(1);
    row.stray_text = rr.size(2);
    row.features.resize(fm.columns);
    for (std::size_t j = 0; j < fm.columns; ++j) row.features[j].descriptor_index = j;
    while (!r.done() && r.peek().key == "f") {
      Record fr = r.next();
      std::size_t idx = fr.size(0);
      if (idx >= fm.columns) throw Error(Errc::CorruptFile, "feature index out of range");
      std::size_t count = fr.size(1);
      std::size_t at = 2;
      auto& occ = row.features[idx].occurrences;
      for (std::size_t k = 0; k < count; ++k) {
        MeasurementVector mv;
        mv.parse_failed = fr.at(at++) == "1";
        mv.text = fr.at(at++);
        std::size_t nv = fr.size(at++);
        for (std::size_t v = 0; v < nv; ++v) mv.values.push_back(fr.num(at++));
        occ.push_back(std::move(mv));
      }
    }
    fm.rows.push_back(std::move(row));
  }
  std::size_t nd = r.expect("diagnostics").size(0);
  for (std::size_t i = 0; i < nd; ++i) {
    Record d = r.expect("diag");
    fm.diagnostics.push_back({d.at(0), d.at(1)});
  }
  if (!r.done()) throw Error(Errc::CorruptFile, "trailing records in feature matrix");
  return fm;
}

}  // namespace xmlad
