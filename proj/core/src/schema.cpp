#include "xmlad/schema.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "xmlad/digest.hpp"
#include "xmlad/error.hpp"
#include "xmlad/textio.hpp"
#include "xmlad/xml.hpp"

namespace xmlad {

namespace {

constexpr std::string_view kXsdNamespace = "http://www.w3.org/2001/XMLSchema";

bool starts_with_unsigned(std::string_view s) { return s.substr(0, 8) == "unsigned"; }

}  // namespace

std::string_view to_string(AbstractType type) noexcept {
  switch (type) {
    case AbstractType::Numerical: return "Numerical";
    case AbstractType::Enumeration: return "Enumeration";
    case AbstractType::String: return "String";
    case AbstractType::Date: return "Date";
  }
  return "String";
}

AbstractType abstract_type_from_string(std::string_view name) {
  if (name == "Numerical") return AbstractType::Numerical;
  if (name == "Enumeration") return AbstractType::Enumeration;
  if (name == "String") return AbstractType::String;
  if (name == "Date") return AbstractType::Date;
  throw Error(Errc::CorruptFile, "unknown abstract type '" + std::string(name) + "'");
}

AbstractType map_xsd_type(std::string_view xsd_type_name) noexcept {
  std::string_view t = xml::strip_prefix(xsd_type_name);
  static constexpr std::array<std::string_view, 13> numerical = {
      "double", "float", "decimal", "int", "integer", "long", "short", "byte",
      "nonNegativeInteger", "positiveInteger", "negativeInteger", "nonPositiveInteger", "number"};
  if (std::find(numerical.begin(), numerical.end(), t) != numerical.end() || starts_with_unsigned(t)) {
    return AbstractType::Numerical;
  }
  if (t == "date" || t == "dateTime" || t == "time" || t.substr(0, 5) == "gYear") return AbstractType::Date;
  if (t == "boolean") return AbstractType::Enumeration;
  return AbstractType::String;
}

SchemaVector::SchemaVector(std::vector<ElementDescriptor> descriptors, std::string source_hash,
                           std::vector<SchemaDiagnostic> diagnostics)
    : descriptors_(std::move(descriptors)),
      source_hash_(std::move(source_hash)),
      diagnostics_(std::move(diagnostics)) {
  for (std::size_t i = 0; i < descriptors_.size(); ++i) {
    if (!index_.emplace(descriptors_[i].path, i).second) {
      throw Error(Errc::MalformedSchema, "duplicate descriptor path " + descriptors_[i].path);
    }
  }
}

std::optional<std::size_t> SchemaVector::find(std::string_view path) const {
  auto it = index_.find(std::string(path));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

struct SimpleInfo {
  AbstractType type = AbstractType::String;
  std::string xsd_type = "string";
  std::vector<std::string> enum_values;
};

class XsdWalker {
 public:
  XsdWalker(const xml::Element& schema, const SchemaOptions& options) : schema_(schema), options_(options) {
    for (const auto& a : schema.attributes) {
      std::string_view q = a.qname;
      if (q == "xmlns") {
        if (a.value == kXsdNamespace) default_is_xsd_ = true;
      } else if (q.substr(0, 6) == "xmlns:") {
        if (a.value == kXsdNamespace) xsd_prefixes_.insert(std::string(q.substr(6)));
      }
    }
    for (const auto* child : schema.child_elements()) {
      std::string_view kind = child->local_name();
      const std::string* name = child->attribute("name");
      if (kind == "element" && name) {
        global_elements_.emplace(*name, child);
        global_order_.push_back(child);
      } else if (kind == "complexType" && name) {
        complex_types_.emplace(*name, child);
      } else if (kind == "simpleType" && name) {
        simple_types_.emplace(*name, child);
      } else if (kind == "group" && name) {
        groups_.emplace(*name, child);
      } else if (kind == "attributeGroup" && name) {
        attribute_groups_.emplace(*name, child);
      } else if (kind == "attribute" && name) {
        global_attributes_.emplace(*name, child);
      } else if (kind == "include" || kind == "import" || kind == "redefine" || kind == "override") {
        report("/", "xs:" + std::string(kind) + " is not supported; only single-file schemas are read");
      }
    }
  }

  std::vector<ElementDescriptor> run() {
    std::set<std::string> referenced;
    collect_refs(schema_, referenced);
    std::vector<const xml::Element*> roots;
    for (const auto* e : global_order_) {
      if (!referenced.count(*e->attribute("name"))) roots.push_back(e);
    }
    if (roots.empty()) roots = global_order_;
    for (const auto* r : roots) walk_element(*r, "");
    return std::move(out_);
  }

  std::vector<SchemaDiagnostic> diagnostics() { return std::move(diagnostics_); }

 private:
  void report(const std::string& path, const std::string& message) {
    diagnostics_.push_back({"UnsupportedConstruct", path, message});
  }

  void collect_refs(const xml::Element& e, std::set<std::string>& refs) const {
    for (const auto* c : e.child_elements()) {
      if (c->local_name() == "element") {
        if (const auto* ref = c->attribute("ref")) refs.insert(std::string(xml::strip_prefix(*ref)));
      }
      collect_refs(*c, refs);
    }
  }

  bool is_builtin(std::string_view qname) const {
    auto colon = qname.find(':');
    if (colon == std::string_view::npos) {
      if (default_is_xsd_) return true;
      return !simple_types_.count(std::string(qname)) && !complex_types_.count(std::string(qname));
    }
    return xsd_prefixes_.count(std::string(qname.substr(0, colon))) > 0;
  }

  static OccursBounds occurs_of(const xml::Element& decl) {
    OccursBounds b;
    if (const auto* mn = decl.attribute("minOccurs")) b.min = parse_uint(*mn);
    if (const auto* mx = decl.attribute("maxOccurs")) {
      if (*mx == "unbounded") {
        b.max.reset();
      } else {
        b.max = parse_uint(*mx);
      }
    }
    return b;
  }

  SimpleInfo builtin_info(std::string_view qname) const {
    SimpleInfo info;
    info.xsd_type = std::string(xml::strip_prefix(qname));
    info.type = map_xsd_type(info.xsd_type);
    if (info.xsd_type == "boolean") info.enum_values = {"false", "true"};
    return info;
  }

  SimpleInfo resolve_type_name(std::string_view qname, const std::string& path) {
    if (is_builtin(qname)) return builtin_info(qname);
    std::string local(xml::strip_prefix(qname));
    auto it = simple_types_.find(local);
    if (it == simple_types_.end()) {
      report(path, "unresolved simple type '" + std::string(qname) + "'; treated as string");
      return {};
    }
    if (!active_simple_.insert(local).second) {
      report(path, "recursive simple type '" + local + "'");
      return {};
    }
    SimpleInfo info = resolve_simple(*it->second, path);
    active_simple_.erase(local);
    return info;
  }

  SimpleInfo resolve_simple(const xml::Element& simple_type, const std::string& path) {
    for (const auto* c : simple_type.child_elements()) {
      std::string_view kind = c->local_name();
      if (kind == "restriction") {
        SimpleInfo base;
        if (const auto* b = c->attribute("base")) {
          base = resolve_type_name(*b, path);
        } else {
          for (const auto* inner : c->child_elements()) {
            if (inner->local_name() == "simpleType") base = resolve_simple(*inner, path);
          }
        }
        std::vector<std::string> values;
        for (const auto* facet : c->child_elements()) {
          if (facet->local_name() != "enumeration") continue;
          const auto* v = facet->attribute("value");
          if (v && std::find(values.begin(), values.end(), *v) == values.end()) values.push_back(*v);
        }
        if (!values.empty()) {
          base.type = AbstractType::Enumeration;
          base.enum_values = std::move(values);
        }
        return base;
      }
      if (kind == "list" || kind == "union") {
        SimpleInfo info;
        info.xsd_type = std::string(kind);
        return info;
      }
    }
    return {};
  }

  void emit(ElementDescriptor d) {
    for (const auto& existing : out_) {
      if (existing.path == d.path) return;  // same path reachable twice (e.g. choice branches)
    }
    out_.push_back(std::move(d));
  }

  void emit_simple(const std::string& path, std::string name, const SimpleInfo& info, OccursBounds occurs) {
    ElementDescriptor d;
    d.path = path;
    d.name = std::move(name);
    d.abstract_type = info.type;
    d.xsd_type = info.xsd_type;
    d.enum_values = info.enum_values;
    d.occurs = occurs;
    emit(std::move(d));
  }

  void walk_attribute(const xml::Element& decl, const std::string& owner_path) {
    if (!options_.include_attributes) return;
    const xml::Element* target = &decl;
    if (const auto* ref = decl.attribute("ref")) {
      std::string local(xml::strip_prefix(*ref));
      auto it = global_attributes_.find(local);
      if (it == global_attributes_.end()) {
        report(owner_path + "/@" + local, "unresolved attribute ref '" + *ref + "'");
        return;
      }
      target = it->second;
    }
    const auto* name = target->attribute("name");
    if (!name) return;
    const auto* use = decl.attribute("use");
    if (use && *use == "prohibited") return;
    OccursBounds occurs{(use && *use == "required") ? 1u : 0u, 1};
    std::string path = owner_path + "/@" + *name;
    SimpleInfo info;
    if (const auto* t = target->attribute("type")) {
      info = resolve_type_name(*t, path);
    } else {
      for (const auto* c : target->child_elements()) {
        if (c->local_name() == "simpleType") info = resolve_simple(*c, path);
      }
    }
    emit_simple(path, *name, info, occurs);
  }

  void walk_attribute_group(const xml::Element& ref, const std::string& owner_path) {
    const auto* r = ref.attribute("ref");
    if (!r) {
      walk_attribute_children(ref, owner_path);
      return;
    }
    std::string local(xml::strip_prefix(*r));
    auto it = attribute_groups_.find(local);
    if (it == attribute_groups_.end()) {
      report(owner_path, "unresolved attributeGroup '" + *r + "'");
      return;
    }
    if (!active_groups_.insert("@" + local).second) {
      report(owner_path, "recursive attributeGroup '" + local + "'");
      return;
    }
    walk_attribute_children(*it->second, owner_path);
    active_groups_.erase("@" + local);
  }

  void walk_attribute_children(const xml::Element& holder, const std::string& owner_path) {
    for (const auto* c : holder.child_elements()) {
      std::string_view kind = c->local_name();
      if (kind == "attribute") {
        walk_attribute(*c, owner_path);
      } else if (kind == "attributeGroup") {
        walk_attribute_group(*c, owner_path);
      } else if (kind == "anyAttribute") {
        report(owner_path, "xs:anyAttribute is not supported");
      }
    }
  }

  // Handles sequence/choice/all/group/element/any and attributes in document order.
  void walk_content(const xml::Element& holder, const std::string& owner_path) {
    for (const auto* c : holder.child_elements()) {
      std::string_view kind = c->local_name();
      if (kind == "sequence" || kind == "choice" || kind == "all") {
        walk_content(*c, owner_path);
      } else if (kind == "element") {
        walk_element(*c, owner_path);
      } else if (kind == "group") {
        walk_group(*c, owner_path);
      } else if (kind == "any") {
        report(owner_path, "xs:any is not supported");
      } else if (kind == "attribute") {
        walk_attribute(*c, owner_path);
      } else if (kind == "attributeGroup") {
        walk_attribute_group(*c, owner_path);
      } else if (kind == "anyAttribute") {
        report(owner_path, "xs:anyAttribute is not supported");
      }
    }
  }

  void walk_group(const xml::Element& ref, const std::string& owner_path) {
    const auto* r = ref.attribute("ref");
    if (!r) {
      walk_content(ref, owner_path);
      return;
    }
    std::string local(xml::strip_prefix(*r));
    auto it = groups_.find(local);
    if (it == groups_.end()) {
      report(owner_path, "unresolved group '" + *r + "'");
      return;
    }
    if (!active_groups_.insert(local).second) {
      report(owner_path, "recursive group '" + local + "'");
      return;
    }
    walk_content(*it->second, owner_path);
    active_groups_.erase(local);
  }

  void walk_complex(const xml::Element& complex_type, const std::string& path, const std::string& name,
                    OccursBounds occurs) {
    const auto* mixed = complex_type.attribute("mixed");
    if (mixed && (*mixed == "true" || *mixed == "1")) {
      SimpleInfo info;
      info.xsd_type = "mixed";
      emit_simple(path, name, info, occurs);
    }
    for (const auto* c : complex_type.child_elements()) {
      std::string_view kind = c->local_name();
      if (kind == "annotation") continue;
      if (kind == "simpleContent") {
        for (const auto* deriv : c->child_elements()) {
          std::string_view dk = deriv->local_name();
          if (dk != "extension" && dk != "restriction") continue;
          SimpleInfo info;
          if (const auto* base = deriv->attribute("base")) {
            if (!is_builtin(*base) && complex_types_.count(std::string(xml::strip_prefix(*base)))) {
              // simple content inherited from a complex type with simple content
              info = simple_content_of(*complex_types_.at(std::string(xml::strip_prefix(*base))), path);
            } else {
              info = resolve_type_name(*base, path);
            }
          }
          std::vector<std::string> values;
          for (const auto* facet : deriv->child_elements()) {
            if (facet->local_name() != "enumeration") continue;
            if (const auto* v = facet->attribute("value")) {
              if (std::find(values.begin(), values.end(), *v) == values.end()) values.push_back(*v);
            }
          }
          if (!values.empty()) {
            info.type = AbstractType::Enumeration;
            info.enum_values = std::move(values);
          }
          emit_simple(path, name, info, occurs);
          walk_attribute_children(*deriv, path);
        }
      } else if (kind == "complexContent") {
        for (const auto* deriv : c->child_elements()) {
          std::string_view dk = deriv->local_name();
          if (dk == "extension") {
            if (const auto* base = deriv->attribute("base")) {
              std::string local(xml::strip_prefix(*base));
              auto it = complex_types_.find(local);
              if (it != complex_types_.end()) {
                if (active_types_.insert(local).second) {
                  walk_complex(*it->second, path, name, occurs);
                  active_types_.erase(local);
                } else {
                  report(path, "recursive type '" + local + "'");
                }
              } else if (local != "anyType") {
                report(path, "unresolved base type '" + *base + "'");
              }
            }
            walk_content(*deriv, path);
          } else if (dk == "restriction") {
            walk_content(*deriv, path);
          }
        }
      } else {
        walk_content(complex_type, path);
        break;  // walk_content already visited every remaining child
      }
    }
  }

  SimpleInfo simple_content_of(const xml::Element& complex_type, const std::string& path) {
    for (const auto* c : complex_type.child_elements()) {
      if (c->local_name() != "simpleContent") continue;
      for (const auto* deriv : c->child_elements()) {
        if (const auto* base = deriv->attribute("base")) return resolve_type_name(*base, path);
      }
    }
    return {};
  }

  void walk_element(const xml::Element& decl, const std::string& parent_path) {
    const xml::Element* target = &decl;
    OccursBounds occurs = occurs_of(decl);
    if (const auto* ref = decl.attribute("ref")) {
      std::string local(xml::strip_prefix(*ref));
      auto it = global_elements_.find(local);
      if (it == global_elements_.end()) {
        report(parent_path + "/" + local, "unresolved element ref '" + *ref + "'");
        return;
      }
      target = it->second;
    }
    const auto* name_attr = target->attribute("name");
    if (!name_attr) return;
    std::string name = *name_attr;
    std::string path = parent_path + "/" + name;
    if (target->attribute("substitutionGroup")) {
      report(path, "substitution groups are not supported");
      return;
    }
    if (!active_elements_.insert(target).second) {
      report(path, "recursive element declaration");
      return;
    }

    if (const auto* type = target->attribute("type")) {
      std::string local(xml::strip_prefix(*type));
      if (!is_builtin(*type) && complex_types_.count(local)) {
        if (active_types_.insert(local).second) {
          walk_complex(*complex_types_.at(local), path, name, occurs);
          active_types_.erase(local);
        } else {
          report(path, "recursive type '" + local + "'");
        }
      } else if (local == "anyType" && is_builtin(*type)) {
        emit_simple(path, name, SimpleInfo{}, occurs);
      } else {
        emit_simple(path, name, resolve_type_name(*type, path), occurs);
      }
    } else {
      bool handled = false;
      for (const auto* c : target->child_elements()) {
        if (c->local_name() == "simpleType") {
          emit_simple(path, name, resolve_simple(*c, path), occurs);
          handled = true;
        } else if (c->local_name() == "complexType") {
          walk_complex(*c, path, name, occurs);
          handled = true;
        }
      }
      if (!handled) emit_simple(path, name, SimpleInfo{}, occurs);
    }
    active_elements_.erase(target);
  }

  const xml::Element& schema_;
  SchemaOptions options_;
  bool default_is_xsd_ = false;
  std::set<std::string> xsd_prefixes_;
  std::map<std::string, const xml::Element*> global_elements_;
  std::vector<const xml::Element*> global_order_;
  std::map<std::string, const xml::Element*> complex_types_;
  std::map<std::string, const xml::Element*> simple_types_;
  std::map<std::string, const xml::Element*> groups_;
  std::map<std::string, const xml::Element*> attribute_groups_;
  std::map<std::string, const xml::Element*> global_attributes_;
  std::set<std::string> active_types_;
  std::set<std::string> active_simple_;
  std::set<std::string> active_groups_;
  std::set<const xml::Element*> active_elements_;
  std::vector<ElementDescriptor> out_;
  std::vector<SchemaDiagnostic> diagnostics_;
};

}  // namespace

SchemaVector parse_xsd(std::string_view xsd_text, const SchemaOptions& options) {
  xml::Document doc;
  try {
    doc = xml::parse(xsd_text);
  } catch (const Error& e) {
    throw Error(Errc::MalformedSchema, e.what());
  }
  if (doc.root.local_name() != "schema") {
    throw Error(Errc::MalformedSchema, "root element is <" + doc.root.qname + ">, expected xs:schema");
  }
  XsdWalker walker(doc.root, options);
  std::vector<ElementDescriptor> descriptors;
  try {
    descriptors = walker.run();
  } catch (const Error& e) {
    // parse_uint on a bad occurs value
    throw Error(Errc::MalformedSchema, e.what());
  }
  return SchemaVector(std::move(descriptors), sha256_hex(xsd_text), walker.diagnostics());
}

std::string serialize_schema(const SchemaVector& schema) {
  RecordWriter w("schema", 1);
  w.record("source_hash", {schema.source_hash()});
  w.record("descriptors", {std::to_string(schema.size())});
  for (const auto& d : schema.descriptors()) {
    std::vector<std::string> fields = {
        d.path,
        d.name,
        std::string(to_string(d.abstract_type)),
        d.xsd_type,
        std::to_string(d.occurs.min),
        d.occurs.max ? std::to_string(*d.occurs.max) : "unbounded",
        std::to_string(d.enum_values.size())};
    fields.insert(fields.end(), d.enum_values.begin(), d.enum_values.end());
    w.record("d", fields);
  }
  w.record("diagnostics", {std::to_string(schema.diagnostics().size())});
  for (const auto& diag : schema.diagnostics()) w.record("w", {diag.kind, diag.path, diag.message});
  return w.finish();
}

SchemaVector deserialize_schema(std::string_view content) {
  RecordReader r(content, "schema", 1);
  std::string hash = r.expect("source_hash").at(0);
  std::size_t n = r.expect("descriptors").size(0);
  std::vector<ElementDescriptor> descriptors;
  descriptors.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Record rec = r.expect("d");
    ElementDescriptor d;
    d.path = rec.at(0);
    d.name = rec.at(1);
    d.abstract_type = abstract_type_from_string(rec.at(2));
    d.xsd_type = rec.at(3);
    d.occurs.min = parse_uint(rec.at(4));
    if (rec.at(5) == "unbounded") {
      d.occurs.max.reset();
    } else {
      d.occurs.max = parse_uint(rec.at(5));
    }
    std::size_t k = rec.size(6);
    for (std::size_t j = 0; j < k; ++j) d.enum_values.push_back(rec.at(7 + j));
    descriptors.push_back(std::move(d));
  }
  std::size_t nd = r.expect("diagnostics").size(0);
  std::vector<SchemaDiagnostic> diags;
  for (std::size_t i = 0; i < nd; ++i) {
    Record rec = r.expect("w");
    diags.push_back({rec.at(0), rec.at(1), rec.at(2)});
  }
  if (!r.done()) throw Error(Errc::CorruptFile, "trailing records in schema file");
  return SchemaVector(std::move(descriptors), std::move(hash), std::move(diags));
}

}  // namespace xmlad
