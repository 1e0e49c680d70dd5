#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace bpws {

/// Absolute concept identifier, SAWSDL modelReference style.
struct SemanticConcept {
  std::string iri;

  auto operator<=>(const SemanticConcept&) const = default;
};

/// Non-empty, no whitespace, contains a "://" scheme separator.
bool is_valid_iri(std::string_view iri);

}  // namespace bpws
