#include "xmlad/xml.hpp"

#include <expat.h>

#include <memory>

#include "xmlad/error.hpp"

namespace xmlad::xml {

Node::Node(Element e) : kind(NodeKind::Element), element(std::make_unique<Element>(std::move(e))) {}

Node::Node(const Node& other)
    : kind(other.kind),
      text(other.text),
      element(other.element ? std::make_unique<Element>(*other.element) : nullptr) {}

Node& Node::operator=(const Node& other) {
  if (this != &other) {
    Node copy(other);
    *this = std::move(copy);
  }
  return *this;
}

Node::~Node() = default;

std::string_view strip_prefix(std::string_view qname) noexcept {
  auto colon = qname.rfind(':');
  return colon == std::string_view::npos ? qname : qname.substr(colon + 1);
}

std::string_view Element::local_name() const { return strip_prefix(qname); }

const std::string* Element::attribute(std::string_view local) const {
  for (const auto& a : attributes) {
    if (strip_prefix(a.qname) == local) return &a.value;
  }
  return nullptr;
}

std::string Element::text() const {
  std::string out;
  for (const auto& c : children) {
    if (c.kind == NodeKind::Text || c.kind == NodeKind::CData) out += c.text;
  }
  return out;
}

bool Element::has_element_children() const {
  for (const auto& c : children) {
    if (c.kind == NodeKind::Element) return true;
  }
  return false;
}

std::vector<const Element*> Element::child_elements() const {
  std::vector<const Element*> out;
  for (const auto& c : children) {
    if (c.kind == NodeKind::Element) out.push_back(c.element.get());
  }
  return out;
}

std::vector<Element*> Element::child_elements() {
  std::vector<Element*> out;
  for (auto& c : children) {
    if (c.kind == NodeKind::Element) out.push_back(c.element.get());
  }
  return out;
}

namespace {

struct Builder {
  Document doc;
  std::vector<Element*> stack;
  bool have_root = false;
  bool in_cdata = false;

  void append_text(const char* s, int len) {
    if (stack.empty()) return;  // whitespace outside the root
    auto& kids = stack.back()->children;
    NodeKind want = in_cdata ? NodeKind::CData : NodeKind::Text;
    if (!kids.empty() && kids.back().kind == want && (want == NodeKind::Text || in_cdata)) {
      kids.back().text.append(s, static_cast<std::size_t>(len));
    } else {
      kids.emplace_back(want, std::string(s, static_cast<std::size_t>(len)));
    }
  }
};

void XMLCALL on_start(void* data, const XML_Char* name, const XML_Char** atts) {
  auto* b = static_cast<Builder*>(data);
  Element e;
  e.qname = name;
  for (int i = 0; atts[i] != nullptr; i += 2) e.attributes.push_back({atts[i], atts[i + 1]});
  if (b->stack.empty()) {
    b->doc.root = std::move(e);
    b->have_root = true;
    b->stack.push_back(&b->doc.root);
  } else {
    auto& kids = b->stack.back()->children;
    kids.emplace_back(std::move(e));
    b->stack.push_back(kids.back().element.get());
  }
}

void XMLCALL on_end(void* data, const XML_Char*) {
  static_cast<Builder*>(data)->stack.pop_back();
}

void XMLCALL on_chars(void* data, const XML_Char* s, int len) {
  static_cast<Builder*>(data)->append_text(s, len);
}

void XMLCALL on_cdata_start(void* data) {
  auto* b = static_cast<Builder*>(data);
  b->in_cdata = true;
  if (!b->stack.empty()) b->stack.back()->children.emplace_back(NodeKind::CData, std::string());
}

void XMLCALL on_cdata_end(void* data) { static_cast<Builder*>(data)->in_cdata = false; }

void XMLCALL on_comment(void* data, const XML_Char* text) {
  auto* b = static_cast<Builder*>(data);
  if (!b->stack.empty()) b->stack.back()->children.emplace_back(NodeKind::Comment, std::string(text));
}

void write_element(const Element& e, std::string& out) {
  out += '<';
  out += e.qname;
  for (const auto& a : e.attributes) {
    out += ' ';
    out += a.qname;
    out += "=\"";
    out += escape_attribute(a.value);
    out += '"';
  }
  if (e.children.empty()) {
    out += "/>";
    return;
  }
  out += '>';
  for (const auto& c : e.children) {
    switch (c.kind) {
      case NodeKind::Element: write_element(*c.element, out); break;
      case NodeKind::Text: out += escape_text(c.text); break;
      case NodeKind::CData: {
        // "]]>" cannot appear inside a section; split it across two.
        std::string_view rest = c.text;
        out += "<![CDATA[";
        for (auto pos = rest.find("]]>"); pos != std::string_view::npos; pos = rest.find("]]>")) {
          out.append(rest.substr(0, pos + 2));
          out += "]]><![CDATA[";
          rest.remove_prefix(pos + 2);
        }
        out.append(rest);
        out += "]]>";
        break;
      }
      case NodeKind::Comment:
        out += "<!--";
        out += c.text;
        out += "-->";
        break;
    }
  }
  out += "</";
  out += e.qname;
  out += '>';
}

}  // namespace

Document parse(std::string_view text) {
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(
      XML_ParserCreate("UTF-8"), &XML_ParserFree);
  if (!parser) throw Error(Errc::MalformedXml, "cannot allocate XML parser");
  Builder builder;
  XML_SetUserData(parser.get(), &builder);
  XML_SetElementHandler(parser.get(), on_start, on_end);
  XML_SetCharacterDataHandler(parser.get(), on_chars);
  XML_SetCdataSectionHandler(parser.get(), on_cdata_start, on_cdata_end);
  XML_SetCommentHandler(parser.get(), on_comment);
  if (XML_Parse(parser.get(), text.data(), static_cast<int>(text.size()), XML_TRUE) == XML_STATUS_ERROR) {
    throw Error(Errc::MalformedXml,
                std::string(XML_ErrorString(XML_GetErrorCode(parser.get()))) + " at line " +
                    std::to_string(XML_GetCurrentLineNumber(parser.get())) + ", column " +
                    std::to_string(XML_GetCurrentColumnNumber(parser.get())));
  }
  if (!builder.have_root) throw Error(Errc::MalformedXml, "no root element");
  return std::move(builder.doc);
}

std::string serialize(const Document& doc) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  write_element(doc.root, out);
  out += '\n';
  return out;
}

std::string escape_text(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '\r': out += "&#13;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string escape_attribute(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\t': out += "&#9;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace xmlad::xml
