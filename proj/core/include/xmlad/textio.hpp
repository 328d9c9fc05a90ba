#pragma once

// Line-oriented, tab-separated record files shared by every persisted
// artifact (.xadschema, .xadfm, .xaddict, .xadmodel, .xadtruth).
//
//   xmlad-<kind> v<version>
//   <key>\t<field>\t<field>...
//   ...
//   digest\t<sha256 of every preceding byte>
//
// Fields are backslash-escaped (\\, \t, \n, \r). Doubles use the shortest
// representation that round-trips exactly.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace xmlad {

std::string format_double(double value);
double parse_double(std::string_view text);
std::int64_t parse_int(std::string_view text);
std::uint64_t parse_uint(std::string_view text);

std::string escape_field(std::string_view raw);
std::string unescape_field(std::string_view escaped);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

struct FileHeader {
  std::string kind;
  int version = 0;
};

/// Parses only the first line; throws CorruptFile when it is not an xmlad header.
FileHeader peek_header(std::string_view content);

class RecordWriter {
 public:
  RecordWriter(std::string_view kind, int version);

  void record(std::string_view key, const std::vector<std::string>& fields = {});

  /// Appends the digest line and returns the complete file content.
  std::string finish();

 private:
  std::string buffer_;
  bool finished_ = false;
};

struct Record {
  std::string key;
  std::vector<std::string> fields;

  const std::string& at(std::size_t i) const;
  double num(std::size_t i) const { return parse_double(at(i)); }
  std::int64_t integer(std::size_t i) const { return parse_int(at(i)); }
  std::size_t size(std::size_t i) const { return static_cast<std::size_t>(parse_uint(at(i))); }
};

class RecordReader {
 public:
  /// Validates header kind, version and trailing digest before any record is read.
  RecordReader(std::string_view content, std::string_view kind, int version);

  bool done() const { return next_ >= records_.size(); }
  const Record& peek() const;
  Record next();
  Record expect(std::string_view key);

 private:
  std::vector<Record> records_;
  std::size_t next_ = 0;
};

}  // namespace xmlad
