#pragma once

// Minimal XML subset used by all document formats: elements, double-quoted
// attributes, character data, comments. Serialization is canonical (LF,
// 2-space indent, attributes in stored order) so identical values always
// produce identical bytes.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bpws::xml {

struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attrs;
  std::vector<Element> children;
  std::string text;  // concatenated character data, trimmed

  const std::string* attr(std::string_view key) const;
  std::string attr_or(std::string_view key, std::string fallback) const;
  const Element* child(std::string_view name) const;
  std::vector<const Element*> children_named(std::string_view name) const;

  void set(std::string key, std::string value) { attrs.emplace_back(std::move(key), std::move(value)); }

  bool operator==(const Element&) const = default;
};

/// Throws Error{MalformedDocument} with a line:column location on bad input.
Element parse(std::string_view input);

std::string serialize(const Element& root);

std::string escape_text(std::string_view s);
std::string escape_attr(std::string_view s);

}  // namespace bpws::xml
