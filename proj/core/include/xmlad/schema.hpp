#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace xmlad {

enum class AbstractType { Numerical, Enumeration, String, Date };

std::string_view to_string(AbstractType type) noexcept;
AbstractType abstract_type_from_string(std::string_view name);

struct OccursBounds {
  std::uint64_t min = 1;
  std::optional<std::uint64_t> max = 1;  // nullopt == unbounded

  bool operator==(const OccursBounds&) const = default;
};

struct ElementDescriptor {
  std::string path;  // "/Root/Child" or "/Root/Child/@attr"
  std::string name;  // local name ("attr" for attributes)
  AbstractType abstract_type = AbstractType::String;
  std::string xsd_type;  // built-in base type the declaration resolved to
  std::vector<std::string> enum_values;
  OccursBounds occurs;

  bool is_attribute() const { return path.rfind("/@") != std::string::npos; }
  bool operator==(const ElementDescriptor&) const = default;
};

struct SchemaDiagnostic {
  std::string kind;  // "UnsupportedConstruct"
  std::string path;
  std::string message;

  bool operator==(const SchemaDiagnostic&) const = default;
};

/// Ordered element descriptors in depth-first declaration order.
class SchemaVector {
 public:
  SchemaVector() = default;
  SchemaVector(std::vector<ElementDescriptor> descriptors, std::string source_hash,
               std::vector<SchemaDiagnostic> diagnostics = {});

  const std::vector<ElementDescriptor>& descriptors() const { return descriptors_; }
  const std::string& source_hash() const { return source_hash_; }
  const std::vector<SchemaDiagnostic>& diagnostics() const { return diagnostics_; }
  std::size_t size() const { return descriptors_.size(); }
  const ElementDescriptor& operator[](std::size_t i) const { return descriptors_[i]; }

  std::optional<std::size_t> find(std::string_view path) const;

  bool operator==(const SchemaVector& other) const {
    return descriptors_ == other.descriptors_ && source_hash_ == other.source_hash_ &&
           diagnostics_ == other.diagnostics_;
  }

 private:
  std::vector<ElementDescriptor> descriptors_;
  std::string source_hash_;
  std::vector<SchemaDiagnostic> diagnostics_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct SchemaOptions {
  bool include_attributes = true;
};

/// Maps an XSD built-in type name (prefix optional) to its abstract type.
/// Enumeration restrictions are resolved by parse_xsd, not here; xs:boolean
/// is the one built-in that maps to Enumeration.
AbstractType map_xsd_type(std::string_view xsd_type_name) noexcept;

/// Throws Error(MalformedSchema) if the text is not parseable XML or not an
/// xs:schema. Unsupported constructs are collected in diagnostics().
SchemaVector parse_xsd(std::string_view xsd_text, const SchemaOptions& options = {});

std::string serialize_schema(const SchemaVector& schema);
SchemaVector deserialize_schema(std::string_view content);

}  // namespace xmlad
