#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "xmlad/error.hpp"
#include "xmlad/inject.hpp"
#include "xmlad/xml.hpp"

using namespace xmlad;

namespace {

constexpr const char* kXsd = R"(<?xml version="1.0"?>
<xs:schema xmlns:xs="http://www.w3.org/2001/XMLSchema">
  <xs:element name="Doc">
    <xs:complexType>
      <xs:sequence>
        <xs:element name="V" type="xs:decimal" minOccurs="0" maxOccurs="unbounded"/>
        <xs:element name="N" type="xs:int" minOccurs="0" maxOccurs="unbounded"/>
        <xs:element name="S" type="xs:string" minOccurs="0" maxOccurs="unbounded"/>
        <xs:element name="E" minOccurs="0">
          <xs:simpleType>
            <xs:restriction base="xs:string">
              <xs:enumeration value="a"/>
              <xs:enumeration value="b"/>
            </xs:restriction>
          </xs:simpleType>
        </xs:element>
      </xs:sequence>
    </xs:complexType>
  </xs:element>
</xs:schema>)";

const SchemaVector& schema() {
  static const SchemaVector s = parse_xsd(kXsd);
  return s;
}

std::string make_doc(int numbers, int strings, bool with_enum = false) {
  std::string doc = "<Doc>";
  for (int i = 0; i < numbers; ++i) doc += "<V>" + std::to_string(i + 1) + ".5</V>";
  for (int i = 0; i < strings; ++i) doc += "<S>text number " + std::to_string(i) + "</S>";
  if (with_enum) doc += "<E>a</E>";
  return doc + "</Doc>";
}

InjectionSpec spec_with(double index, std::vector<AttackClass> classes = {std::begin(kAllAttackClasses),
                                                                          std::end(kAllAttackClasses)}) {
  InjectionSpec s;
  s.anomaly_index = index;
  s.classes = std::move(classes);
  return s;
}

}  // namespace

TEST(Inject, CeilingTargetCount) {
  const std::string doc = make_doc(25, 25);
  EXPECT_EQ(simple_element_count(doc, schema()), 50u);
  Rng rng(1);
  const auto out = inject_document(doc, schema(), spec_with(0.1), rng, "d");
  EXPECT_EQ(out.record.injections.size(), 5u);
  EXPECT_FALSE(out.record.shortfall);
  EXPECT_EQ(out.record.document_id, "d");
  EXPECT_EQ(out.record.label, Label::Anomalous);
  Rng rng2(1);
  EXPECT_EQ(inject_document(make_doc(3, 0), schema(), spec_with(0.01), rng2).record.injections.size(), 1u);
}

TEST(Inject, NoEligibleTargetIsShortfall) {
  const std::string doc = make_doc(0, 4);
  Rng rng(2);
  const auto out = inject_document(doc, schema(), spec_with(0.5, {AttackClass::ValuePoisoning}), rng);
  EXPECT_EQ(out.xml, doc);
  EXPECT_TRUE(out.record.injections.empty());
  EXPECT_TRUE(out.record.shortfall);
}

TEST(Inject, FewerTargetsThanRequested) {
  Rng rng(3);
  const auto out = inject_document(make_doc(2, 10), schema(), spec_with(1.0, {AttackClass::ValuePoisoning}), rng);
  EXPECT_EQ(out.record.injections.size(), 2u);
  EXPECT_TRUE(out.record.shortfall);
}

TEST(Inject, DeterministicForFixedSeed) {
  const std::string doc = make_doc(10, 10, true);
  Rng a(42), b(42), c(43);
  const auto x = inject_document(doc, schema(), spec_with(0.3), a);
  const auto y = inject_document(doc, schema(), spec_with(0.3), b);
  const auto z = inject_document(doc, schema(), spec_with(0.3), c);
  EXPECT_EQ(x.xml, y.xml);
  EXPECT_EQ(x.record, y.record);
  EXPECT_NE(x.xml, z.xml);
}

TEST(InjectProperty, WellFormedAndTypeCompatible) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const int numbers = static_cast<int>(seed % 7), strings = static_cast<int>((seed / 7) % 6);
    const std::string doc = make_doc(numbers, strings, seed % 2 == 0);
    const auto spec = spec_with(0.05 + 0.95 * double(seed % 10) / 9.0);
    const auto out = inject_document(doc, schema(), spec, rng);
    ASSERT_NO_THROW(xml::parse(out.xml)) << out.xml;
    const std::size_t simple = simple_element_count(doc, schema());
    const auto target = static_cast<std::size_t>(std::ceil(spec.anomaly_index * double(simple)));
    EXPECT_TRUE(out.record.injections.size() == target || out.record.shortfall);
    EXPECT_LE(out.record.injections.size(), target);
    std::set<std::string> element_targets;
    for (const auto& inj : out.record.injections) {
      EXPECT_EQ(inj.original_digest.size(), 64u);
      if (!targets_element(inj.attack)) {
        EXPECT_EQ(inj.attack, AttackClass::CdataInjection);
        EXPECT_EQ(inj.target_path, "/Doc");
        continue;
      }
      const auto idx = schema().find(inj.target_path);
      ASSERT_TRUE(idx.has_value()) << inj.target_path;
      const auto type = schema()[*idx].abstract_type;
      if (inj.attack == AttackClass::ValuePoisoning) {
        EXPECT_EQ(type, AbstractType::Numerical);
      } else {
        EXPECT_EQ(type, AbstractType::String);
      }
    }
    if (out.record.injections.empty()) {
      EXPECT_EQ(out.xml, doc);
    }
  }
}

TEST(Inject, PoisonedValuesStayParseable) {
  Rng rng(7);
  const auto out = inject_document("<Doc><N>12</N><N>-3</N></Doc>", schema(),
                                   spec_with(1.0, {AttackClass::ValuePoisoning}), rng);
  ASSERT_EQ(out.record.injections.size(), 2u);
  const auto doc = xml::parse(out.xml);
  for (const auto* n : doc.root.child_elements()) {
    const std::string text = n->text();
    EXPECT_EQ(text.find('.'), std::string::npos) << text;  // xs:int stays integral
    EXPECT_NO_THROW((void)std::stoll(text));
  }
}

TEST(Inject, CdataLandsBetweenSiblings) {
  Rng rng(8);
  const auto out = inject_document(make_doc(2, 2), schema(), spec_with(1.0, {AttackClass::CdataInjection}), rng);
  EXPECT_EQ(out.record.injections.size(), 3u);  // three gaps between four siblings
  EXPECT_TRUE(out.record.shortfall);
  const auto doc = xml::parse(out.xml);
  std::size_t sections = 0;
  for (const auto& c : doc.root.children) {
    if (c.kind == xml::NodeKind::CData) {
      ++sections;
      EXPECT_NE(c.text.find("<script>"), std::string::npos);
    }
  }
  EXPECT_EQ(sections, 3u);
  EXPECT_EQ(doc.root.children.front().kind, xml::NodeKind::Element);
  EXPECT_EQ(doc.root.children.back().kind, xml::NodeKind::Element);
}

TEST(Inject, SpecValidation) {
  EXPECT_THROW(spec_with(0.0).validate(), Error);
  EXPECT_THROW(spec_with(1.5).validate(), Error);
  EXPECT_THROW(spec_with(0.1, {}).validate(), Error);
  EXPECT_NO_THROW(spec_with(1.0).validate());
  EXPECT_EQ(parse_attack_classes("xss,cdata"),
            (std::vector<AttackClass>{AttackClass::Xss, AttackClass::CdataInjection}));
  EXPECT_THROW(parse_attack_classes("xss,bogus"), Error);
}

TEST(Corpus, FractionAndDeterminism) {
  std::vector<CorpusDocument> corpus;
  for (int i = 0; i < 100; ++i) corpus.push_back({"d" + std::to_string(i), make_doc(i % 5 + 1, i % 3)});
  auto spec = spec_with(0.2);
  spec.seed = 99;
  const auto a = make_anomalous_corpus(corpus, schema(), spec, 0.5);
  const auto b = make_anomalous_corpus(corpus, schema(), spec, 0.5);
  EXPECT_EQ(std::count(a.labels.begin(), a.labels.end(), Label::Anomalous), 50);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.records, b.records);
  ASSERT_EQ(a.documents.size(), 100u);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    EXPECT_EQ(a.documents[i].id, corpus[i].id);
    EXPECT_EQ(a.records[i].label, a.labels[i]);
    if (a.labels[i] == Label::Normal) {
      EXPECT_EQ(a.documents[i].text, corpus[i].text);
      EXPECT_TRUE(a.records[i].injections.empty());
    }
  }
  const auto all = make_anomalous_corpus(corpus, schema(), spec, 1.0);
  EXPECT_TRUE(std::all_of(all.labels.begin(), all.labels.end(), [](Label l) { return l == Label::Anomalous; }));
  EXPECT_THROW(make_anomalous_corpus({}, schema(), spec, 0.5), Error);
}

TEST(Corpus, TruthRoundTrip) {
  std::vector<CorpusDocument> corpus;
  for (int i = 0; i < 10; ++i) corpus.push_back({"doc\t" + std::to_string(i), make_doc(3, 3)});
  auto spec = spec_with(0.3);
  spec.seed = 5;
  const auto lc = make_anomalous_corpus(corpus, schema(), spec, 0.4);
  EXPECT_EQ(deserialize_truth(serialize_truth(lc.records)), lc.records);
}
