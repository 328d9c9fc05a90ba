#include "xmlad/inject.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "xmlad/digest.hpp"
#include "xmlad/error.hpp"
#include "xmlad/payloads.hpp"
#include "xmlad/textio.hpp"
#include "xmlad/xml.hpp"

namespace xmlad {

std::string_view to_string(AttackClass c) noexcept {
  switch (c) {
    case AttackClass::ValuePoisoning: return "value-poisoning";
    case AttackClass::Xss: return "xss";
    case AttackClass::CdataInjection: return "cdata";
    case AttackClass::XpathInjection: return "xpath";
    case AttackClass::DataLeakage: return "data-leakage";
  }
  return "xss";
}

AttackClass attack_class_from_string(std::string_view text) {
  if (text == "value-poisoning" || text == "ValuePoisoning") return AttackClass::ValuePoisoning;
  if (text == "xss" || text == "Xss") return AttackClass::Xss;
  if (text == "cdata" || text == "CdataInjection") return AttackClass::CdataInjection;
  if (text == "xpath" || text == "XpathInjection") return AttackClass::XpathInjection;
  if (text == "data-leakage" || text == "DataLeakage") return AttackClass::DataLeakage;
  throw Error(Errc::UsageError, "unknown attack class '" + std::string(text) + "'");
}

std::vector<AttackClass> parse_attack_classes(std::string_view list) {
  std::vector<AttackClass> out;
  while (!list.empty()) {
    const auto comma = list.find(',');
    const auto item = list.substr(0, comma);
    if (!item.empty()) {
      const auto c = attack_class_from_string(item);
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  if (out.empty()) throw Error(Errc::UsageError, "empty attack class list");
  return out;
}

bool targets_element(AttackClass c) noexcept { return c != AttackClass::CdataInjection; }

void InjectionSpec::validate() const {
  if (!(anomaly_index > 0.0 && anomaly_index <= 1.0)) throw Error(Errc::UsageError, "anomaly index must lie in (0, 1]");
  if (classes.empty()) throw Error(Errc::UsageError, "no attack classes requested");
}

namespace {

struct ElementSite {
  xml::Element* element;
  std::string path;
  const ElementDescriptor* descriptor;
};

struct GapSite {
  xml::Element* parent;
  std::string path;
  std::size_t after;  // insert after the after-th element child
};

struct Sites {
  std::vector<ElementSite> numerical;
  std::vector<ElementSite> strings;
  std::vector<GapSite> gaps;
  std::size_t simple_count = 0;
};

void collect(xml::Element& e, const std::string& parent_path, const SchemaVector& schema, Sites& sites) {
  std::string path = parent_path + "/" + std::string(e.local_name());
  const auto children = e.child_elements();
  if (children.empty()) {
    if (auto idx = schema.find(path)) {
      const auto& d = schema[*idx];
      ++sites.simple_count;
      if (d.abstract_type == AbstractType::Numerical) sites.numerical.push_back({&e, path, &d});
      if (d.abstract_type == AbstractType::String) sites.strings.push_back({&e, path, &d});
    }
    return;
  }
  for (std::size_t k = 0; k + 1 < children.size(); ++k) sites.gaps.push_back({&e, path, k});
  for (auto* c : children) collect(*c, path, schema, sites);
}

bool integral_type(std::string_view xsd_type) {
  const auto t = xml::strip_prefix(xsd_type);
  return t == "int" || t == "integer" || t == "long" || t == "short" || t == "byte" ||
         t.find("Integer") != std::string_view::npos || t.starts_with("unsigned");
}

void replace_text(xml::Element& e, std::string text) {
  e.children.clear();
  e.children.emplace_back(xml::NodeKind::Text, std::move(text));
}

std::string poisoned_value(const ElementSite& site, Rng& rng) {
  const auto measured = measure_occurrence(site.element->text(), *site.descriptor);
  const double original = measured.parse_failed ? 0.0 : measured.values.front();
  const double magnitude = 10.0 * std::max(1.0, std::abs(original));
  const double v = rng.uniform(-magnitude, magnitude);
  if (integral_type(site.descriptor->xsd_type)) return std::to_string(std::llround(v));
  return format_double(v);
}

std::string pick_payload(const std::vector<std::string>& table, Rng& rng) {
  const std::string& p = table[rng.below(table.size())];
  return rng.coin() ? payloads::percent_encode(p) : p;
}

std::string leakage(const std::vector<std::string>& sentences, Rng& rng) {
  const std::size_t n = sentences.size();
  const std::size_t len = std::min<std::size_t>(1 + rng.below(5), n);
  const std::size_t start = rng.below(n - len + 1);
  std::string out;
  for (std::size_t i = start; i < start + len; ++i) {
    if (!out.empty()) out.push_back(' ');
    out += sentences[i];
  }
  return out;
}

void insert_cdata(const GapSite& gap, std::string payload) {
  std::size_t seen = 0;
  auto& kids = gap.parent->children;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (kids[i].kind != xml::NodeKind::Element) continue;
    if (seen++ == gap.after) {
      kids.insert(kids.begin() + static_cast<std::ptrdiff_t>(i) + 1, xml::Node(xml::NodeKind::CData, std::move(payload)));
      return;
    }
  }
}

}  // namespace

std::size_t simple_element_count(std::string_view xml_text, const SchemaVector& schema) {
  xml::Document doc = xml::parse(xml_text);
  Sites sites;
  collect(doc.root, "", schema, sites);
  return sites.simple_count;
}

InjectedDocument inject_document(std::string_view xml_text, const SchemaVector& schema, const InjectionSpec& spec,
                                 Rng& rng, std::string document_id) {
  spec.validate();
  xml::Document doc = xml::parse(xml_text);
  Sites sites;
  collect(doc.root, "", schema, sites);

  InjectedDocument out;
  out.record.document_id = std::move(document_id);
  out.record.label = Label::Anomalous;
  const auto target = static_cast<std::size_t>(std::ceil(spec.anomaly_index * static_cast<double>(sites.simple_count)));

  static const std::vector<std::string> bundled = payloads::split_sentences(payloads::leakage_text());
  const auto& sentences = spec.payload_corpus.empty() ? bundled : spec.payload_corpus;

  std::set<const xml::Element*> used;
  std::set<std::size_t> used_gaps;
  auto free_elements = [&](const std::vector<ElementSite>& pool) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (!used.count(pool[i].element)) idx.push_back(i);
    }
    return idx;
  };
  auto pool_for = [&](AttackClass c) -> const std::vector<ElementSite>& {
    return c == AttackClass::ValuePoisoning ? sites.numerical : sites.strings;
  };

  // Gap indices are resolved against the original child lists, so CDATA
  // insertions are deferred until every element edit is done.
  std::vector<std::pair<std::size_t, std::string>> pending_cdata;
  while (out.record.injections.size() < target) {
    std::vector<AttackClass> eligible;
    for (AttackClass c : spec.classes) {
      const bool has_target = targets_element(c) ? !free_elements(pool_for(c)).empty()
                                                 : used_gaps.size() < sites.gaps.size();
      if (has_target) eligible.push_back(c);
    }
    if (eligible.empty()) break;
    const AttackClass c = eligible[rng.below(eligible.size())];

    if (!targets_element(c)) {
      std::vector<std::size_t> free;
      for (std::size_t i = 0; i < sites.gaps.size(); ++i) {
        if (!used_gaps.count(i)) free.push_back(i);
      }
      const std::size_t g = free[rng.below(free.size())];
      used_gaps.insert(g);
      const auto& gap = sites.gaps[g];
      pending_cdata.emplace_back(g, payloads::cdata_payload(rng.below(payloads::cdata_scripts().size())));
      out.record.injections.push_back({c, gap.path, sha256_hex(gap.parent->text())});
      continue;
    }

    const auto& pool = pool_for(c);
    const auto free = free_elements(pool);
    const ElementSite& site = pool[free[rng.below(free.size())]];
    used.insert(site.element);
    const std::string original = site.element->text();
    std::string replacement;
    switch (c) {
      case AttackClass::ValuePoisoning: replacement = poisoned_value(site, rng); break;
      case AttackClass::Xss: replacement = pick_payload(payloads::xss(), rng); break;
      case AttackClass::XpathInjection: replacement = pick_payload(payloads::xpath(), rng); break;
      case AttackClass::DataLeakage: replacement = leakage(sentences, rng); break;
      case AttackClass::CdataInjection: break;
    }
    replace_text(*site.element, std::move(replacement));
    out.record.injections.push_back({c, site.path, sha256_hex(original)});
  }

  // Insert from the highest gap down so earlier positions stay valid.
  std::sort(pending_cdata.begin(), pending_cdata.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  for (auto& [g, payload] : pending_cdata) insert_cdata(sites.gaps[g], std::move(payload));

  out.record.shortfall = out.record.injections.size() < target || target == 0;
  out.xml = out.record.injections.empty() ? std::string(xml_text) : xml::serialize(doc);
  return out;
}

LabeledCorpus make_anomalous_corpus(const std::vector<CorpusDocument>& corpus, const SchemaVector& schema,
                                    const InjectionSpec& spec, double fraction_anomalous) {
  if (corpus.empty()) throw Error(Errc::EmptyCorpus, "corpus is empty");
  if (!(fraction_anomalous > 0.0 && fraction_anomalous <= 1.0)) {
    throw Error(Errc::UsageError, "anomalous fraction must lie in (0, 1]");
  }
  spec.validate();
  const std::size_t n = corpus.size();
  const auto chosen_count = static_cast<std::size_t>(std::floor(fraction_anomalous * static_cast<double>(n)));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng selector(derive_seed(spec.seed, 0));
  selector.shuffle(order);
  std::vector<bool> chosen(n, false);
  for (std::size_t i = 0; i < chosen_count; ++i) chosen[order[i]] = true;

  LabeledCorpus out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& doc = corpus[i];
    if (!chosen[i]) {
      out.documents.push_back(doc);
      out.labels.push_back(Label::Normal);
      out.records.push_back({doc.id, Label::Normal, {}, false});
      continue;
    }
    Rng rng(derive_seed(spec.seed, i + 1));
    auto injected = inject_document(doc.text, schema, spec, rng, doc.id);
    out.documents.push_back({doc.id, std::move(injected.xml)});
    out.labels.push_back(Label::Anomalous);
    out.records.push_back(std::move(injected.record));
  }
  return out;
}

std::string serialize_truth(const std::vector<InjectionRecord>& records) {
  RecordWriter w("truth", 1);
  w.record("documents", {std::to_string(records.size())});
  for (const auto& r : records) {
    w.record("doc", {r.document_id, std::string(to_string(r.label)), r.shortfall ? "1" : "0",
                     std::to_string(r.injections.size())});
    for (const auto& inj : r.injections) {
      w.record("i", {std::string(to_string(inj.attack)), inj.target_path, inj.original_digest});
    }
  }
  return w.finish();
}

std::vector<InjectionRecord> deserialize_truth(std::string_view content) {
  RecordReader r(content, "truth", 1);
  const std::size_t n = r.expect("documents").size(0);
  std::vector<InjectionRecord> out(n);
  for (auto& rec : out) {
    Record d = r.expect("doc");
    rec.document_id = d.at(0);
    rec.label = label_from_string(d.at(1));
    rec.shortfall = d.at(2) == "1";
    const std::size_t k = d.size(3);
    for (std::size_t j = 0; j < k; ++j) {
      Record i = r.expect("i");
      rec.injections.push_back({attack_class_from_string(i.at(0)), i.at(1), i.at(2)});
    }
  }
  if (!r.done()) throw Error(Errc::CorruptFile, "trailing records in truth file");
  return out;
}

}  // namespace xmlad
