#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "xmlad/error.hpp"
#include "xmlad/extract.hpp"
#include "xmlad/flatten.hpp"
#include "xmlad/generate.hpp"
#include "xmlad/textio.hpp"
#include "xmlad/xml.hpp"

using namespace xmlad;

namespace {

constexpr const char* kXsd = R"(<?xml version="1.0"?>
<xs:schema xmlns:xs="http://www.w3.org/2001/XMLSchema">
  <xs:element name="T">
    <xs:complexType>
      <xs:sequence>
        <xs:element name="Amount" type="xs:decimal"/>
        <xs:element name="Kind">
          <xs:simpleType>
            <xs:restriction base="xs:string">
              <xs:enumeration value="a"/>
              <xs:enumeration value="b"/>
            </xs:restriction>
          </xs:simpleType>
        </xs:element>
        <xs:element name="Note" type="xs:string"/>
        <xs:element name="Day" type="xs:date"/>
      </xs:sequence>
    </xs:complexType>
  </xs:element>
</xs:schema>)";

constexpr const char* kParams = R"({
  "elements": {
    "/T/Amount": {"mean": 10, "stddev": 3, "decimals": 4},
    "/T/Kind": {"weights": {"a": 3, "b": 1}},
    "/T/Note": {"vocabulary": ["x", "yy"], "words": [1, 5]},
    "/T/Day": {"start": "2020-01-01", "end": "2020-12-31"}
  }
})";

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return Errc::IoError;
}

}  // namespace

TEST(Generate, ZeroDocuments) {
  const auto schema = parse_xsd(kXsd);
  EXPECT_TRUE(generate_normal_corpus(schema, parse_generation_params(kParams, schema), 0, 1).empty());
}

TEST(Generate, DeterministicPerSeed) {
  const auto schema = parse_xsd(kXsd);
  const auto params = parse_generation_params(kParams, schema);
  EXPECT_EQ(generate_normal_corpus(schema, params, 5, 9), generate_normal_corpus(schema, params, 5, 9));
  EXPECT_NE(generate_normal_corpus(schema, params, 5, 9), generate_normal_corpus(schema, params, 5, 10));
}

TEST(Generate, PurchaseOrderDocumentsMatchSchema) {
  const auto schema = parse_xsd(read_file(XMLAD_TEST_DATA "/purchase_order.xsd"));
  const auto params = parse_generation_params(read_file(XMLAD_TEST_DATA "/purchase_order_params.json"), schema);
  const auto docs = generate_normal_corpus(schema, params, 50, 3);
  ASSERT_EQ(docs.size(), 50u);
  for (const auto& d : docs) {
    const auto row = extract_row(d, schema);
    EXPECT_EQ(row.unknown_elements, 0u) << d;
    EXPECT_EQ(row.parse_failures(), 0u) << d;
    for (std::size_t i = 0; i < schema.size(); ++i) {
      const auto& occ = schema[i].occurs;
      if (occ.max && schema[i].path.find("/Item/") == std::string::npos) {
        EXPECT_LE(row.features[i].occurrences.size(), *occ.max) << schema[i].path;
      }
    }
  }
}

TEST(Generate, DefaultParamsCoverEverything) {
  const auto schema = parse_xsd(read_file(XMLAD_TEST_DATA "/purchase_order.xsd"));
  const auto docs = generate_normal_corpus(schema, default_generation_params(schema), 10, 4);
  for (const auto& d : docs) EXPECT_EQ(extract_row(d, schema).unknown_elements, 0u);
}

TEST(Generate, SampleMeansConverge) {
  const auto schema = parse_xsd(kXsd);
  const auto docs = generate_normal_corpus(schema, parse_generation_params(kParams, schema), 1000, 11);
  std::vector<CorpusDocument> corpus;
  for (std::size_t i = 0; i < docs.size(); ++i) corpus.push_back({std::to_string(i), docs[i]});
  const auto fm = build_feature_matrix(corpus, schema);
  const auto data = flatten_matrix(fm, schema, {});
  const double m = 1000;
  double amount = 0, kind_a = 0, words = 0, day = 0;
  for (const auto& r : data.rows) {
    amount += r[0];
    kind_a += r[3];
    words += r[5];
    day += r[10];
  }
  EXPECT_NEAR(amount / m, 10.0, 3 * 3.0 / std::sqrt(m));
  EXPECT_NEAR(kind_a / m, 0.75, 3 * std::sqrt(0.75 * 0.25 / m));
  EXPECT_NEAR(words / m, 3.0, 3 * std::sqrt(2.0 / m));  // uniform {1..5}: variance 2
  double start = 0, end = 0;
  ASSERT_TRUE(parse_iso8601("2020-01-01", start));
  ASSERT_TRUE(parse_iso8601("2020-12-31", end));
  const double spread = (end - start) / std::sqrt(12.0);
  EXPECT_NEAR(day / m, (start + end) / 2, 3 * spread / std::sqrt(m) + 86400);
}

TEST(Generate, MissingParams) {
  const auto schema = parse_xsd(kXsd);
  auto params = parse_generation_params(kParams, schema);
  params.elements.erase("/T/Note");
  EXPECT_EQ(code_of([&] { generate_normal_corpus(schema, params, 3, 1); }), Errc::MissingParams);
  EXPECT_EQ(code_of([&] { parse_generation_params("{not json", schema); }), Errc::MissingParams);
  EXPECT_EQ(code_of([&] { parse_generation_params(R"({"elements": {"/T/Note": {"vocabulary": "nope"}}})", schema); }),
            Errc::MissingParams);
}

TEST(Generate, FormatDate) {
  EXPECT_EQ(format_date(0, false), "1970-01-01");
  EXPECT_EQ(format_date(951868800 + 3723, true), "2000-03-01T01:02:03");
}
