#pragma once

// Anomaly injection: plants attack payloads into well-formed documents at
// schema-permitted positions and records the ground truth.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xmlad/dataset.hpp"
#include "xmlad/extract.hpp"
#include "xmlad/rng.hpp"
#include "xmlad/schema.hpp"

namespace xmlad {

enum class AttackClass { ValuePoisoning, Xss, CdataInjection, XpathInjection, DataLeakage };

inline constexpr AttackClass kAllAttackClasses[] = {AttackClass::ValuePoisoning, AttackClass::Xss,
                                                    AttackClass::CdataInjection, AttackClass::XpathInjection,
                                                    AttackClass::DataLeakage};

/// "value-poisoning", "xss", "cdata", "xpath", "data-leakage".
std::string_view to_string(AttackClass c) noexcept;
/// Accepts the short names above or the enumerator names.
AttackClass attack_class_from_string(std::string_view text);
/// Comma-separated list of attack classes.
std::vector<AttackClass> parse_attack_classes(std::string_view list);

/// True for classes that overwrite an element's content (all but CDATA).
bool targets_element(AttackClass c) noexcept;

struct InjectionSpec {
  double anomaly_index = 0.05;
  std::vector<AttackClass> classes{std::begin(kAllAttackClasses), std::end(kAllAttackClasses)};
  std::uint64_t seed = 0;
  std::vector<std::string> payload_corpus;  // sentences; empty selects the bundled text

  /// Throws UsageError for an index outside (0, 1] or an empty class list.
  void validate() const;
};

struct Injection {
  AttackClass attack = AttackClass::Xss;
  std::string target_path;      // overwritten element, or the CDATA parent
  std::string original_digest;  // SHA-256 of the replaced text

  bool operator==(const Injection&) const = default;
};

struct InjectionRecord {
  std::string document_id;
  Label label = Label::Normal;
  std::vector<Injection> injections;
  bool shortfall = false;  // fewer injections than the target count

  bool operator==(const InjectionRecord&) const = default;
};

struct InjectedDocument {
  std::string xml;
  InjectionRecord record;
};

/// Count of elements whose path is a non-attribute schema descriptor and
/// that carry no element children.
std::size_t simple_element_count(std::string_view xml_text, const SchemaVector& schema);

/// ceil(anomaly_index * simple elements) injections. Each draw picks a class
/// uniformly among requested classes that still have a free target, then a
/// target uniformly. A document with no eligible target is returned
/// unchanged with a shortfall flag.
InjectedDocument inject_document(std::string_view xml_text, const SchemaVector& schema, const InjectionSpec& spec,
                                 Rng& rng, std::string document_id = {});

struct LabeledCorpus {
  std::vector<CorpusDocument> documents;
  std::vector<Label> labels;
  std::vector<InjectionRecord> records;  // one per document, same order
};

/// Injects floor(fraction * N) documents chosen uniformly without
/// replacement. Document i uses a generator seeded by derive_seed(seed, i + 1).
LabeledCorpus make_anomalous_corpus(const std::vector<CorpusDocument>& corpus, const SchemaVector& schema,
                                    const InjectionSpec& spec, double fraction_anomalous);

std::string serialize_truth(const std::vector<InjectionRecord>& records);
std::vector<InjectionRecord> deserialize_truth(std::string_view content);

}  // namespace xmlad
