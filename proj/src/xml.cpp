#include "bpws/xml.hpp"

#include <cctype>

#include "bpws/error.hpp"

namespace bpws::xml {

const std::string* Element::attr(std::string_view key) const {
  for (const auto& [k, v] : attrs)
    if (k == key) return &v;
  return nullptr;
}

std::string Element::attr_or(std::string_view key, std::string fallback) const {
  const std::string* v = attr(key);
  return v ? *v : std::move(fallback);
}

const Element* Element::child(std::string_view name) const {
  for (const auto& c : children)
    if (c.name == name) return &c;
  return nullptr;
}

std::vector<const Element*> Element::children_named(std::string_view name) const {
  std::vector<const Element*> out;
  for (const auto& c : children)
    if (c.name == name) out.push_back(&c);
  return out;
}

namespace {

class Parser {
public:
  explicit Parser(std::string_view in) : in_(in) {}

  Element run() {
    skip_prolog();
    Element root = element();
    skip_misc();
    if (pos_ != in_.size()) fail("trailing content after root element");
    return root;
  }

private:
  std::string_view in_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    size_t line = 1, col = 1;
    for (size_t i = 0; i < pos_ && i < in_.size(); ++i) {
      if (in_[i] == '\n') { ++line; col = 1; } else ++col;
    }
    throw Error(ErrorKind::MalformedDocument, std::to_string(line) + ":" + std::to_string(col), msg);
  }

  bool eof() const { return pos_ >= in_.size(); }
  char peek() const { return in_[pos_]; }
  bool starts_with(std::string_view s) const { return in_.substr(pos_, s.size()) == s; }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  void skip_comment() {
    pos_ += 4;  // "<!--"
    size_t end = in_.find("-->", pos_);
    if (end == std::string_view::npos) fail("unterminated comment");
    pos_ = end + 3;
  }

  void skip_prolog() {
    skip_ws();
    if (starts_with("<?")) {
      size_t end = in_.find("?>", pos_);
      if (end == std::string_view::npos) fail("unterminated declaration");
      pos_ = end + 2;
    }
    skip_misc();
  }

  void skip_misc() {
    for (;;) {
      skip_ws();
      if (starts_with("<!--")) skip_comment();
      else return;
    }
  }

  std::string name_token() {
    size_t start = pos_;
    while (!eof()) {
      char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':' || c == '.')
        ++pos_;
      else
        break;
    }
    if (pos_ == start) fail("expected name");
    return std::string(in_.substr(start, pos_ - start));
  }

  void expect(char c) {
    if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string unescape(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] != '&') {
        out += raw[i];
        continue;
      }
      size_t semi = raw.find(';', i);
      if (semi == std::string_view::npos) fail("unterminated entity");
      std::string_view ent = raw.substr(i + 1, semi - i - 1);
      if (ent == "lt") out += '<';
      else if (ent == "gt") out += '>';
      else if (ent == "amp") out += '&';
      else if (ent == "quot") out += '"';
      else if (ent == "apos") out += '\'';
      else fail("unknown entity &" + std::string(ent) + ";");
      i = semi;
    }
    return out;
  }

  Element element() {
    expect('<');
    Element el;
    el.name = name_token();
    for (;;) {
      skip_ws();
      if (eof()) fail("unterminated start tag");
      if (peek() == '/') {
        ++pos_;
        expect('>');
        return el;  // empty element
      }
      if (peek() == '>') {
        ++pos_;
        break;
      }
      std::string key = name_token();
      skip_ws();
      expect('=');
      skip_ws();
      expect('"');
      size_t vstart = pos_;
      size_t vend = in_.find('"', vstart);
      if (vend == std::string_view::npos) fail("unterminated attribute value");
      pos_ = vend + 1;
      el.attrs.emplace_back(std::move(key), unescape(in_.substr(vstart, vend - vstart)));
    }
    // content
    std::string text;
    for (;;) {
      if (eof()) fail("unterminated element <" + el.name + ">");
      if (starts_with("<!--")) {
        skip_comment();
        continue;
      }
      if (starts_with("</")) {
        pos_ += 2;
        std::string close = name_token();
        if (close != el.name) fail("mismatched close tag </" + close + "> for <" + el.name + ">");
        skip_ws();
        expect('>');
        break;
      }
      if (peek() == '<') {
        el.children.push_back(element());
        continue;
      }
      size_t start = pos_;
      while (!eof() && peek() != '<') ++pos_;
      text += unescape(in_.substr(start, pos_ - start));
    }
    // trim surrounding whitespace from character data
    size_t b = text.find_first_not_of(" \t\r\n");
    size_t e = text.find_last_not_of(" \t\r\n");
    if (b != std::string::npos) el.text = text.substr(b, e - b + 1);
    return el;
  }
};

void write_element(const Element& el, int depth, std::string& out) {
  std::string indent(static_cast<size_t>(depth) * 2, ' ');
  out += indent;
  out += '<';
  out += el.name;
  for (const auto& [k, v] : el.attrs) {
    out += ' ';
    out += k;
    out += "=\"";
    out += escape_attr(v);
    out += '"';
  }
  if (el.children.empty() && el.text.empty()) {
    out += "/>\n";
    return;
  }
  out += '>';
  if (el.children.empty()) {
    out += escape_text(el.text);
  } else {
    out += '\n';
    for (const auto& c : el.children) write_element(c, depth + 1, out);
    if (!el.text.empty()) {
      out += indent;
      out += "  ";
      out += escape_text(el.text);
      out += '\n';
    }
    out += indent;
  }
  out += "</";
  out += el.name;
  out += ">\n";
}

}  // namespace

Element parse(std::string_view input) { return Parser(input).run(); }

std::string serialize(const Element& root) {
  std::string out;
  write_element(root, 0, out);
  return out;
}

std::string escape_text(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string escape_attr(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace bpws::xml

namespace bpws {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::MalformedDocument: return "MalformedDocument";
    case ErrorKind::UnresolvedReference: return "UnresolvedReference";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::MalformedLine: return "MalformedLine";
    case ErrorKind::InvalidIri: return "InvalidIri";
    case ErrorKind::MissingAnnotation: return "MissingAnnotation";
    case ErrorKind::DuplicateServiceId: return "DuplicateServiceId";
    case ErrorKind::ArityTooLarge: return "ArityTooLarge";
    case ErrorKind::UnsupportedBehavior: return "UnsupportedBehavior";
    case ErrorKind::UnboundActivity: return "UnboundActivity";
    case ErrorKind::UnknownActivity: return "UnknownActivity";
    case ErrorKind::AlreadyBound: return "AlreadyBound";
    case ErrorKind::NoCandidate: return "NoCandidate";
    case ErrorKind::IoError: return "IoError";
  }
  return "Error";
}

}  // namespace bpws
