#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "oracles/gen.hpp"
#include "xmlad/error.hpp"
#include "xmlad/extract.hpp"
#include "xmlad/textio.hpp"
#include "xmlad/xml.hpp"

using namespace xmlad;

namespace {

ElementDescriptor desc(AbstractType t, std::vector<std::string> values = {}) {
  ElementDescriptor d;
  d.path = "/x";
  d.name = "x";
  d.abstract_type = t;
  d.enum_values = std::move(values);
  return d;
}

SchemaVector payment_schema() {
  std::vector<ElementDescriptor> ds(3);
  ds[0].path = "/Payment/PaymentAmount";
  ds[0].name = "PaymentAmount";
  ds[0].abstract_type = AbstractType::Numerical;
  ds[0].xsd_type = "double";
  ds[1].path = "/Payment/PyValue";
  ds[1].name = "PyValue";
  ds[1].abstract_type = AbstractType::Enumeration;
  ds[1].enum_values = {"A", "B", "C"};
  ds[2].path = "/Payment/Name";
  ds[2].name = "Name";
  ds[2].abstract_type = AbstractType::String;
  return SchemaVector(std::move(ds), "hash");
}

std::size_t leaf_elements(const xml::Element& e) {
  if (!e.has_element_children()) return 1;
  std::size_t n = 0;
  for (const auto* c : e.child_elements()) n += leaf_elements(*c);
  return n;
}

}  // namespace

TEST(Measure, Numerical) {
  const auto mv = measure_occurrence("12.5", desc(AbstractType::Numerical));
  EXPECT_EQ(mv.values, std::vector<double>{12.5});
  EXPECT_FALSE(mv.parse_failed);
  EXPECT_EQ(measure_occurrence(" -1.5e3 ", desc(AbstractType::Numerical)).values, std::vector<double>{-1500.0});
}

TEST(Measure, StringCountsWordsAndCharacters) {
  const auto mv = measure_occurrence("hello brave world", desc(AbstractType::String));
  EXPECT_EQ(mv.values, (std::vector<double>{3, 17}));
  EXPECT_EQ(mv.text, "hello brave world");
  EXPECT_EQ(measure_occurrence("", desc(AbstractType::String)).values, (std::vector<double>{0, 0}));
  EXPECT_EQ(char_length("\xC3\xA9t\xC3\xA9"), 3u);  // UTF-8 "ete" with accents
  EXPECT_EQ(word_count("  a\t\nb  "), 2u);
}

TEST(Measure, EnumerationIndex) {
  EXPECT_EQ(measure_occurrence("B", desc(AbstractType::Enumeration, {"A", "B", "C"})).values,
            std::vector<double>{1});
}

TEST(Measure, FailuresAreFlaggedNotDropped) {
  for (const auto& [text, type] : std::vector<std::pair<std::string, AbstractType>>{
           {"12,5", AbstractType::Numerical}, {"not a date", AbstractType::Date}, {"D", AbstractType::Enumeration}}) {
    const auto mv = measure_occurrence(text, desc(type, {"A", "B", "C"}));
    ASSERT_EQ(mv.values.size(), 1u);
    EXPECT_TRUE(std::isnan(mv.values[0]));
    EXPECT_TRUE(mv.parse_failed) << text;
  }
}

TEST(Measure, Iso8601Forms) {
  double s = 0;
  ASSERT_TRUE(parse_iso8601("1970-01-02", s));
  EXPECT_EQ(s, 86400.0);
  ASSERT_TRUE(parse_iso8601("2000-03-01T00:00:00Z", s));
  EXPECT_EQ(s, 951868800.0);
  ASSERT_TRUE(parse_iso8601("2000-03-01T02:00:00+02:00", s));
  EXPECT_EQ(s, 951868800.0);
  ASSERT_TRUE(parse_iso8601("01:00:30", s));
  EXPECT_EQ(s, 3630.0);
  ASSERT_TRUE(parse_iso8601("1971", s));
  EXPECT_EQ(s, 365.0 * 86400.0);
  EXPECT_FALSE(parse_iso8601("2001-02-29", s));
  EXPECT_FALSE(parse_iso8601("2001-13-01", s));
}

TEST(Extract, TwoOccurrencesOfName) {
  const auto row = extract_row("<Payment><Name>a</Name><Name>b c</Name></Payment>", payment_schema());
  EXPECT_EQ(row.features[2].occurrences.size(), 2u);
  EXPECT_EQ(row.features[2].occurrences[1].values, (std::vector<double>{2, 3}));
}

TEST(Extract, NoSchemaElements) {
  const auto row = extract_row("<Other/>", payment_schema());
  ASSERT_EQ(row.features.size(), 3u);
  for (const auto& f : row.features) EXPECT_TRUE(f.occurrences.empty());
  EXPECT_EQ(row.unknown_elements, 1u);
}

TEST(Extract, PaymentDocument) {
  const auto row = extract_row(
      "<Payment><PaymentAmount>100</PaymentAmount><PyValue>B</PyValue><Name>John Doe</Name></Payment>",
      payment_schema(), "doc");
  EXPECT_EQ(row.id, "doc");
  EXPECT_EQ(row.features[0].occurrences[0].values, std::vector<double>{100.0});
  EXPECT_EQ(row.features[1].occurrences[0].values, std::vector<double>{1});
  EXPECT_EQ(row.features[2].occurrences[0].values, (std::vector<double>{2, 8}));
  EXPECT_EQ(row.unknown_elements, 0u);
  EXPECT_EQ(row.parse_failures(), 0u);
}

TEST(Extract, StrayTextInContainersCounts) {
  const auto row =
      extract_row("<Payment><Name>x</Name><![CDATA[<script/>]]><PyValue>Q</PyValue></Payment>", payment_schema());
  EXPECT_EQ(row.stray_text, 1u);
  EXPECT_EQ(row.parse_failures(), 2u);
}

TEST(Extract, ElementAccountingProperty) {
  const auto schema = payment_schema();
  oracle::Gen g(5);
  const char* names[] = {"PaymentAmount", "PyValue", "Name", "Extra", "Other"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string doc = "<Payment>";
    const int n = g.integer(0, 8);
    for (int i = 0; i < n; ++i) {
      const char* name = names[g.index(5)];
      doc += std::string("<") + name + ">" + std::to_string(g.integer(0, 9)) + "</" + name + ">";
    }
    doc += "</Payment>";
    const auto row = extract_row(doc, schema);
    std::size_t occ = 0;
    for (const auto& f : row.features) occ += f.occurrences.size();
    // an empty root is a known container, not a leaf
    const auto parsed = xml::parse(doc);
    const std::size_t leaves = n == 0 ? 0 : leaf_elements(parsed.root);
    EXPECT_EQ(occ + row.unknown_elements, leaves) << doc;
  }
}

TEST(FeatureMatrix, MalformedDocumentsBecomeDiagnostics) {
  const auto schema = payment_schema();
  std::vector<CorpusDocument> corpus = {{"a", "<Payment><Name>x</Name></Payment>"},
                                        {"b", "<Payment><Name>x</Payment>"},
                                        {"c", "<Payment/>"}};
  const auto fm = build_feature_matrix(corpus, schema);
  ASSERT_EQ(fm.rows.size(), 2u);
  EXPECT_EQ(fm.rows[0].id, "a");
  EXPECT_EQ(fm.rows[1].id, "c");
  ASSERT_EQ(fm.diagnostics.size(), 1u);
  EXPECT_EQ(fm.diagnostics[0].row_id, "b");
  EXPECT_EQ(fm.schema_hash, "hash");

  EXPECT_EQ(build_feature_matrix({{"only", "<Payment/>"}}, schema).rows.size(), 1u);
  try {
    build_feature_matrix({{"bad", "<"}}, schema);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptyCorpus);
  }
}

TEST(FeatureMatrix, PermutingCorpusPermutesRows) {
  const auto schema = payment_schema();
  std::vector<CorpusDocument> corpus;
  for (int i = 0; i < 6; ++i) {
    corpus.push_back({"d" + std::to_string(i),
                      "<Payment><PaymentAmount>" + std::to_string(i) + "</PaymentAmount></Payment>"});
  }
  const auto fm = build_feature_matrix(corpus, schema);
  std::vector<CorpusDocument> reversed(corpus.rbegin(), corpus.rend());
  const auto fr = build_feature_matrix(reversed, schema);
  for (std::size_t i = 0; i < corpus.size(); ++i) EXPECT_EQ(fm.rows[i], fr.rows[corpus.size() - 1 - i]);
}

TEST(FeatureMatrix, SerializationRoundTripsIncludingFailures) {
  const auto schema = payment_schema();
  const auto fm = build_feature_matrix(
      {{"a", "<Payment><PaymentAmount>oops</PaymentAmount><Name>tab\there</Name></Payment>"},
       {"b", "<Payment><PyValue>C</PyValue><PaymentAmount>1e300</PaymentAmount></Payment>"}},
      schema);
  const auto text = serialize_feature_matrix(fm);
  EXPECT_TRUE(text.starts_with("xmlad-fm v1\n"));
  const auto back = deserialize_feature_matrix(text);
  EXPECT_EQ(serialize_feature_matrix(back), text);
  EXPECT_TRUE(back.rows[0].features[0].occurrences[0].parse_failed);
  EXPECT_EQ(back.rows[0].features[2].occurrences[0].text, "tab\there");
  EXPECT_EQ(back.rows[1].features[0].occurrences[0].values[0], 1e300);
}

TEST(Corpus, DirectoryAndManifest) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "xmlad_corpus_test";
  fs::remove_all(dir);
  write_file(dir / "b.xml", "<B/>");
  write_file(dir / "a.xml", "<A/>");
  write_file(dir / "skip.txt", "x");
  const auto docs = load_corpus(dir);
  ASSERT_EQ(docs.size(), 2u);
  EXPECT_EQ(docs[0].id, "a.xml");
  write_file(dir / "list.txt", "# comment\nb.xml\n\na.xml\n");
  const auto listed = load_corpus(dir / "list.txt");
  ASSERT_EQ(listed.size(), 2u);
  EXPECT_EQ(listed[0].text, "<B/>");
  fs::remove_all(dir);
}
