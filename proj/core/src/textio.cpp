#include "xmlad/textio.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "xmlad/digest.hpp"
#include "xmlad/error.hpp"

namespace xmlad {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw Error(Errc::IoError, "cannot format double");
  return std::string(buf.data(), ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  if (text == "nan") return std::nan("");
  if (text == "inf") return HUGE_VAL;
  if (text == "-inf") return -HUGE_VAL;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(Errc::CorruptFile, "bad number '" + std::string(text) + "'");
  }
  return value;
}

std::int64_t parse_int(std::string_view text) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(Errc::CorruptFile, "bad integer '" + std::string(text) + "'");
  }
  return value;
}

std::uint64_t parse_uint(std::string_view text) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(Errc::CorruptFile, "bad unsigned integer '" + std::string(text) + "'");
  }
  return value;
}

std::string escape_field(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string unescape_field(std::string_view escaped) {
  std::string out;
  out.reserve(escaped.size());
  for (std::size_t i = 0; i < escaped.size(); ++i) {
    char c = escaped[i];
    if (c != '\\') {
      out.push_back(c);
      continue;
    }
    if (++i == escaped.size()) throw Error(Errc::CorruptFile, "dangling escape");
    switch (escaped[i]) {
      case '\\': out.push_back('\\'); break;
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      default: throw Error(Errc::CorruptFile, "unknown escape");
    }
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(Errc::IoError, "short write to " + path.string());
}

FileHeader peek_header(std::string_view content) {
  auto eol = content.find('\n');
  std::string_view line = content.substr(0, eol);
  constexpr std::string_view prefix = "xmlad-";
  auto space = line.find(' ');
  if (line.substr(0, prefix.size()) != prefix || space == std::string_view::npos ||
      space + 2 > line.size() || line[space + 1] != 'v') {
    throw Error(Errc::CorruptFile, "missing xmlad header");
  }
  FileHeader header;
  header.kind = std::string(line.substr(prefix.size(), space - prefix.size()));
  std::string_view ver = line.substr(space + 2);
  int v = 0;
  auto [ptr, ec] = std::from_chars(ver.data(), ver.data() + ver.size(), v);
  if (ec != std::errc() || ptr != ver.data() + ver.size()) {
    throw Error(Errc::CorruptFile, "bad header version");
  }
  header.version = v;
  return header;
}

RecordWriter::RecordWriter(std::string_view kind, int version) {
  buffer_ = "xmlad-" + std::string(kind) + " v" + std::to_string(version) + "\n";
}

void RecordWriter::record(std::string_view key, const std::vector<std::string>& fields) {
  buffer_.append(key);
  for (const auto& f : fields) {
    buffer_.push_back('\t');
    buffer_ += escape_field(f);
  }
  buffer_.push_back('\n');
}

std::string RecordWriter::finish() {
  if (!finished_) {
    std::string digest = sha256_hex(buffer_);
    buffer_ += "digest\t" + digest + "\n";
    finished_ = true;
  }
  return buffer_;
}

const std::string& Record::at(std::size_t i) const {
  if (i >= fields.size()) {
    throw Error(Errc::CorruptFile, "record '" + key + "' is missing field " + std::to_string(i));
  }
  return fields[i];
}

RecordReader::RecordReader(std::string_view content, std::string_view kind, int version) {
  FileHeader header = peek_header(content);
  if (header.kind != kind) {
    throw Error(Errc::CorruptFile, "expected xmlad-" + std::string(kind) + ", found xmlad-" + header.kind);
  }
  if (header.version != version) {
    throw Error(Errc::VersionMismatch, "xmlad-" + header.kind + " v" + std::to_string(header.version) +
                                           " is not supported (expected v" + std::to_string(version) + ")");
  }
  if (content.empty() || content.back() != '\n') throw Error(Errc::CorruptFile, "truncated file");
  std::string_view body = content.substr(0, content.size() - 1);
  auto last_eol = body.rfind('\n');
  if (last_eol == std::string_view::npos) throw Error(Errc::CorruptFile, "missing digest");
  std::string_view digest_line = body.substr(last_eol + 1);
  constexpr std::string_view digest_key = "digest\t";
  if (digest_line.substr(0, digest_key.size()) != digest_key) {
    throw Error(Errc::CorruptFile, "missing digest");
  }
  std::string_view covered = content.substr(0, last_eol + 1);
  if (sha256_hex(covered) != digest_line.substr(digest_key.size())) {
    throw Error(Errc::CorruptFile, "digest mismatch");
  }

  std::size_t pos = content.find('\n') + 1;
  while (pos < covered.size()) {
    auto eol = covered.find('\n', pos);
    std::string_view line = covered.substr(pos, eol - pos);
    pos = eol + 1;
    Record rec;
    std::size_t start = 0;
    bool first = true;
    while (true) {
      auto tab = line.find('\t', start);
      std::string_view piece = line.substr(start, tab == std::string_view::npos ? line.npos : tab - start);
      if (first) {
        rec.key = std::string(piece);
        first = false;
      } else {
        rec.fields.push_back(unescape_field(piece));
      }
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    records_.push_back(std::move(rec));
  }
}

const Record& RecordReader::peek() const {
  if (done()) throw Error(Errc::CorruptFile, "unexpected end of records");
  return records_[next_];
}

Record RecordReader::next() {
  if (done()) throw Error(Errc::CorruptFile, "unexpected end of records");
  return records_[next_++];
}

Record RecordReader::expect(std::string_view key) {
  Record rec = next();
  if (rec.key != key) {
    throw Error(Errc::CorruptFile, "expected record '" + std::string(key) + "', found '" + rec.key + "'");
  }
  return rec;
}

}  // namespace xmlad
