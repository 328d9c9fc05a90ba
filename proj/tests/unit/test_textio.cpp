#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles/gen.hpp"
#include "xmlad/digest.hpp"
#include "xmlad/error.hpp"
#include "xmlad/textio.hpp"

using namespace xmlad;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no xmlad::Error thrown";
  return Errc::UsageError;
}

std::string sample_file() {
  RecordWriter w("demo", 1);
  w.record("name", {"tab\there", "newline\nthere", "back\\slash"});
  w.record("empty");
  return w.finish();
}

}  // namespace

TEST(TextIo, DoublesRoundTripExactly) {
  oracle::Gen g(11);
  for (int i = 0; i < 2000; ++i) {
    const double v = std::ldexp(g.real(-1, 1), g.integer(-300, 300));
    EXPECT_EQ(parse_double(format_double(v)), v);
  }
  EXPECT_EQ(parse_double(format_double(std::numeric_limits<double>::denorm_min())),
            std::numeric_limits<double>::denorm_min());
  EXPECT_TRUE(std::isnan(parse_double(format_double(std::nan("")))));
  EXPECT_EQ(parse_double(format_double(-HUGE_VAL)), -HUGE_VAL);
}

TEST(TextIo, BadNumbersAreCorrupt) {
  EXPECT_EQ(code_of([] { parse_double("1.5x"); }), Errc::CorruptFile);
  EXPECT_EQ(code_of([] { parse_uint("-3"); }), Errc::CorruptFile);
}

TEST(TextIo, EscapingRoundTrips) {
  const std::string raw = "a\tb\nc\rd\\e";
  EXPECT_EQ(escape_field(raw).find('\t'), std::string::npos);
  EXPECT_EQ(unescape_field(escape_field(raw)), raw);
}

TEST(TextIo, RecordsRoundTrip) {
  RecordReader r(sample_file(), "demo", 1);
  Record a = r.expect("name");
  ASSERT_EQ(a.fields.size(), 3u);
  EXPECT_EQ(a.at(0), "tab\there");
  EXPECT_EQ(a.at(1), "newline\nthere");
  EXPECT_EQ(a.at(2), "back\\slash");
  EXPECT_TRUE(r.expect("empty").fields.empty());
  EXPECT_TRUE(r.done());
}

TEST(TextIo, DigestCoversEveryPrecedingByte) {
  const std::string content = sample_file();
  const auto digest_line = content.rfind("digest\t");
  EXPECT_EQ(content.substr(digest_line + 7, 64), sha256_hex(content.substr(0, digest_line)));
}

TEST(TextIo, WrongKindIsCorrupt) {
  EXPECT_EQ(code_of([] { RecordReader(sample_file(), "other", 1); }), Errc::CorruptFile);
}

TEST(TextIo, FutureVersionIsVersionMismatch) {
  RecordWriter w("demo", 2);
  w.record("x", {"1"});
  const std::string v2 = w.finish();
  EXPECT_EQ(code_of([&] { RecordReader(v2, "demo", 1); }), Errc::VersionMismatch);
}

TEST(TextIo, TamperedOrTruncatedIsCorrupt) {
  std::string content = sample_file();
  std::string tampered = content;
  tampered[tampered.find("tab")] = 'T';
  EXPECT_EQ(code_of([&] { RecordReader(tampered, "demo", 1); }), Errc::CorruptFile);
  for (std::size_t cut : {content.size() - 1, content.size() - 10, content.size() / 2, std::size_t{3}}) {
    const std::string truncated = content.substr(0, cut);
    EXPECT_EQ(code_of([&] { RecordReader(truncated, "demo", 1); }), Errc::CorruptFile) << cut;
  }
}

TEST(TextIo, ExpectReportsMissingKey) {
  RecordReader r(sample_file(), "demo", 1);
  EXPECT_EQ(code_of([&] { r.expect("nope"); }), Errc::CorruptFile);
}

TEST(Digest, KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
