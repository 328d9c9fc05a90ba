#include <gtest/gtest.h>

#include "xmlad/error.hpp"
#include "xmlad/schema.hpp"
#include "xmlad/textio.hpp"

using namespace xmlad;

namespace {

const char* kPaymentXsd = R"(<?xml version="1.0"?>
<xsd:schema xmlns:xsd="http://www.w3.org/2001/XMLSchema">
  <xsd:element name="Payment">
    <xsd:complexType>
      <xsd:sequence>
        <xsd:element name="PaymentAmount" type="xsd:double"/>
        <xsd:element name="PyValue">
          <xsd:simpleType>
            <xsd:restriction base="xsd:string">
              <xsd:enumeration value="A"/>
              <xsd:enumeration value="B"/>
              <xsd:enumeration value="C"/>
            </xsd:restriction>
          </xsd:simpleType>
        </xsd:element>
        <xsd:element name="Name" type="xsd:string"/>
      </xsd:sequence>
    </xsd:complexType>
  </xsd:element>
</xsd:schema>)";

std::string wrap(const std::string& body) {
  return "<xs:schema xmlns:xs=\"http://www.w3.org/2001/XMLSchema\">" + body + "</xs:schema>";
}

}  // namespace

TEST(Schema, PaymentExampleYieldsThreeTypedDescriptors) {
  const auto s = parse_xsd(kPaymentXsd);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].path, "/Payment/PaymentAmount");
  EXPECT_EQ(s[0].abstract_type, AbstractType::Numerical);
  EXPECT_EQ(s[1].path, "/Payment/PyValue");
  EXPECT_EQ(s[1].abstract_type, AbstractType::Enumeration);
  EXPECT_EQ(s[1].enum_values, (std::vector<std::string>{"A", "B", "C"}));
  EXPECT_EQ(s[2].abstract_type, AbstractType::String);
  EXPECT_TRUE(s.diagnostics().empty());
  EXPECT_EQ(s.source_hash().size(), 64u);
}

TEST(Schema, EmptySchemaHasNoDescriptors) {
  const auto s = parse_xsd(wrap(""));
  EXPECT_EQ(s.size(), 0u);
}

TEST(Schema, DateElement) {
  const auto s = parse_xsd(wrap("<xs:element name=\"When\" type=\"xs:date\"/>"));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].path, "/When");
  EXPECT_EQ(s[0].abstract_type, AbstractType::Date);
}

TEST(Schema, TypeMapping) {
  EXPECT_EQ(map_xsd_type("xsd:double"), AbstractType::Numerical);
  EXPECT_EQ(map_xsd_type("xsd:string"), AbstractType::String);
  EXPECT_EQ(map_xsd_type("xsd:anyURI"), AbstractType::String);
  for (const char* t : {"float", "decimal", "int", "integer", "long", "short", "byte", "unsignedInt",
                        "unsignedByte", "nonNegativeInteger", "positiveInteger"}) {
    EXPECT_EQ(map_xsd_type(t), AbstractType::Numerical) << t;
  }
  for (const char* t : {"date", "dateTime", "time", "gYear", "gYearMonth"}) {
    EXPECT_EQ(map_xsd_type(std::string("xs:") + t), AbstractType::Date) << t;
  }
  for (const char* t : {"token", "base64Binary", "normalizedString", "", "madeUp"}) {
    EXPECT_EQ(map_xsd_type(t), AbstractType::String) << t;
  }
  EXPECT_EQ(map_xsd_type("xs:boolean"), AbstractType::Enumeration);
}

TEST(Schema, BooleanBecomesTwoValuedEnumeration) {
  const auto s = parse_xsd(wrap("<xs:element name=\"Ok\" type=\"xs:boolean\"/>"));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].abstract_type, AbstractType::Enumeration);
  EXPECT_EQ(s[0].enum_values, (std::vector<std::string>{"false", "true"}));
}

TEST(Schema, AttributesAreOptional) {
  const std::string xsd = wrap(R"(<xs:element name="R"><xs:complexType><xs:sequence>
      <xs:element name="V" type="xs:int"/></xs:sequence>
      <xs:attribute name="kind" type="xs:string" use="required"/></xs:complexType></xs:element>)");
  const auto with = parse_xsd(xsd);
  ASSERT_EQ(with.size(), 2u);
  EXPECT_EQ(with[1].path, "/R/@kind");
  EXPECT_TRUE(with[1].is_attribute());
  EXPECT_EQ(with[1].occurs.min, 1u);
  SchemaOptions off;
  off.include_attributes = false;
  EXPECT_EQ(parse_xsd(xsd, off).size(), 1u);
}

TEST(Schema, NamedTypesRefsAndOccurs) {
  const std::string xsd = wrap(R"(
    <xs:simpleType name="Code"><xs:restriction base="xs:token">
      <xs:enumeration value="x"/><xs:enumeration value="y"/></xs:restriction></xs:simpleType>
    <xs:complexType name="LineT"><xs:sequence>
      <xs:element name="Qty" type="xs:positiveInteger"/>
      <xs:element ref="Code" minOccurs="0" maxOccurs="unbounded"/></xs:sequence></xs:complexType>
    <xs:element name="Code" type="Code"/>
    <xs:element name="Order"><xs:complexType><xs:sequence>
      <xs:element name="Line" type="LineT" maxOccurs="unbounded"/></xs:sequence></xs:complexType></xs:element>)");
  const auto s = parse_xsd(xsd);
  ASSERT_EQ(s.size(), 2u) << "the referenced global element is not a root";
  EXPECT_EQ(s[0].path, "/Order/Line/Qty");
  EXPECT_EQ(s[1].path, "/Order/Line/Code");
  EXPECT_EQ(s[1].abstract_type, AbstractType::Enumeration);
  EXPECT_EQ(s[1].occurs.min, 0u);
  EXPECT_FALSE(s[1].occurs.max.has_value());
}

TEST(Schema, RepeatedNamesAtDifferentPositionsAreDistinct) {
  const std::string xsd = wrap(R"(<xs:element name="R"><xs:complexType><xs:sequence>
    <xs:element name="A"><xs:complexType><xs:sequence><xs:element name="Id" type="xs:int"/></xs:sequence></xs:complexType></xs:element>
    <xs:element name="B"><xs:complexType><xs:sequence><xs:element name="Id" type="xs:int"/></xs:sequence></xs:complexType></xs:element>
    </xs:sequence></xs:complexType></xs:element>)");
  const auto s = parse_xsd(xsd);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].path, "/R/A/Id");
  EXPECT_EQ(s[1].path, "/R/B/Id");
}

TEST(Schema, ExtensionsAndGroups) {
  const std::string xsd = wrap(R"(
    <xs:group name="G"><xs:sequence><xs:element name="FromGroup" type="xs:date"/></xs:sequence></xs:group>
    <xs:complexType name="Base"><xs:sequence><xs:element name="B1" type="xs:int"/></xs:sequence></xs:complexType>
    <xs:element name="R"><xs:complexType><xs:complexContent><xs:extension base="Base"><xs:sequence>
      <xs:group ref="G"/>
      <xs:element name="Price"><xs:complexType><xs:simpleContent><xs:extension base="xs:decimal">
        <xs:attribute name="currency" type="xs:string"/></xs:extension></xs:simpleContent></xs:complexType></xs:element>
    </xs:sequence></xs:extension></xs:complexContent></xs:complexType></xs:element>)");
  const auto s = parse_xsd(xsd);
  std::vector<std::string> paths;
  for (const auto& d : s.descriptors()) paths.push_back(d.path);
  EXPECT_EQ(paths, (std::vector<std::string>{"/R/B1", "/R/FromGroup", "/R/Price", "/R/Price/@currency"}));
  EXPECT_EQ(s[2].abstract_type, AbstractType::Numerical);
}

TEST(Schema, UnsupportedConstructsAreReportedAndParsingContinues) {
  const std::string xsd = wrap(R"(<xs:element name="R"><xs:complexType><xs:sequence>
    <xs:any processContents="lax"/>
    <xs:element name="Kept" type="xs:string"/>
    <xs:element ref="Missing"/>
    </xs:sequence></xs:complexType></xs:element>)");
  const auto s = parse_xsd(xsd);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].path, "/R/Kept");
  ASSERT_EQ(s.diagnostics().size(), 2u);
  EXPECT_EQ(s.diagnostics()[0].kind, "UnsupportedConstruct");
  EXPECT_EQ(s.diagnostics()[0].path, "/R");
}

TEST(Schema, RecursionIsCut) {
  const std::string xsd = wrap(R"(
    <xs:complexType name="Node"><xs:sequence>
      <xs:element name="Label" type="xs:string"/>
      <xs:element name="Child" type="Node" minOccurs="0"/></xs:sequence></xs:complexType>
    <xs:element name="Tree" type="Node"/>)");
  const auto s = parse_xsd(xsd);
  ASSERT_GE(s.size(), 1u);
  EXPECT_EQ(s[0].path, "/Tree/Label");
  EXPECT_FALSE(s.diagnostics().empty());
}

TEST(Schema, MalformedInputs) {
  EXPECT_THROW(
      {
        try {
          parse_xsd("<xs:schema");
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), Errc::MalformedSchema);
          throw;
        }
      },
      Error);
  EXPECT_THROW(parse_xsd("<notaschema/>"), Error);
}

TEST(Schema, DeterministicAndRoundTrips) {
  const auto a = serialize_schema(parse_xsd(kPaymentXsd));
  const auto b = serialize_schema(parse_xsd(kPaymentXsd));
  EXPECT_EQ(a, b);
  EXPECT_TRUE(a.starts_with("xmlad-schema v1\n"));
  const auto back = deserialize_schema(a);
  EXPECT_EQ(back, parse_xsd(kPaymentXsd));
  EXPECT_EQ(serialize_schema(back), a);
}

TEST(Schema, FindByPath) {
  const auto s = parse_xsd(kPaymentXsd);
  EXPECT_EQ(s.find("/Payment/Name"), std::optional<std::size_t>(2));
  EXPECT_FALSE(s.find("/Payment").has_value());
}
