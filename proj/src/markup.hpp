#pragma once

// Shared element <-> value conversions for the pieces common to process and
// service documents: type tables, parameters, policies.

#include <string>
#include <vector>

#include "bpws/model.hpp"
#include "bpws/xml.hpp"

namespace bpws::markup {

std::string require_attr(const xml::Element& el, const char* key, const std::string& path);

TypeTable parse_types(const xml::Element& typesEl, const std::string& path);
xml::Element types_to_xml(const TypeTable& types);

Parameter parse_parameter(const xml::Element& el, Direction dir, const std::string& path);
xml::Element parameter_to_xml(const Parameter& p);

Policy parse_policy(const xml::Element& el, const std::string& path,
                    std::vector<std::string>* warnings);
xml::Element policy_to_xml(const Policy& p);

}  // namespace bpws::markup
