#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bpws/model.hpp"

namespace bpws {

struct OperationDescription {
  std::string name;
  SemanticConcept functionalityConcept;
  std::vector<Parameter> inputs;
  std::vector<Parameter> outputs;

  bool operator==(const OperationDescription&) const = default;
};

/// Parsed SAWSDL-style service: one annotated interface plus optional policy.
struct ServiceDescription {
  std::string id;
  std::string endpoint;
  std::string wsdlLocation;
  std::string interfaceName;
  SemanticConcept interfaceConcept;
  std::vector<OperationDescription> operations;
  TypeTable types;
  std::optional<Policy> policy;

  bool operator==(const ServiceDescription&) const = default;
};

/// Throws MalformedDocument / MissingAnnotation / UnresolvedReference.
ServiceDescription parse_service(std::string_view bytes);

std::string serialize_service(const ServiceDescription& s);

/// Parses every `*.service.xml` in the directory, sorted by service id.
/// Throws DuplicateServiceId, or any parse error tagged with its file name.
std::vector<ServiceDescription> load_registry(const std::filesystem::path& dir);

}  // namespace bpws
