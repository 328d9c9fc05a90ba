#pragma once

// Minimal owning XML tree built on expat. Keeps element/attribute order,
// text, CDATA sections and comments so documents can be edited and written
// back out (the injector needs that); processing instructions and the DTD
// are dropped.

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace xmlad::xml {

struct Element;

enum class NodeKind { Element, Text, CData, Comment };

struct Node {
  NodeKind kind = NodeKind::Text;
  std::string text;
  std::unique_ptr<Element> element;

  Node() = default;
  Node(NodeKind k, std::string t) : kind(k), text(std::move(t)) {}
  explicit Node(Element e);
  Node(const Node& other);
  Node& operator=(const Node& other);
  Node(Node&&) noexcept = default;
  Node& operator=(Node&&) noexcept = default;
  ~Node();
};

struct Attribute {
  std::string qname;
  std::string value;
};

struct Element {
  std::string qname;
  std::vector<Attribute> attributes;
  std::vector<Node> children;

  /// Name with any namespace prefix removed.
  std::string_view local_name() const;

  /// Attribute lookup by local name, ignoring prefixes.
  const std::string* attribute(std::string_view local) const;

  /// Concatenated text and CDATA of the direct children.
  std::string text() const;

  bool has_element_children() const;

  /// Direct element children, in document order.
  std::vector<const Element*> child_elements() const;
  std::vector<Element*> child_elements();
};

struct Document {
  Element root;
};

std::string_view strip_prefix(std::string_view qname) noexcept;

/// Throws Error(MalformedXml) with line/column on any well-formedness error.
Document parse(std::string_view text);

std::string serialize(const Document& doc);

std::string escape_text(std::string_view raw);
std::string escape_attribute(std::string_view raw);

}  // namespace xmlad::xml
