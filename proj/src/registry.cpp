#include "bpws/registry.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "bpws/xml.hpp"
#include "markup.hpp"

namespace bpws {

namespace {

using markup::require_attr;

void check_service_concept(const std::optional<SemanticConcept>& c, const std::string& path,
                           const std::string& what) {
  if (!c) throw Error(ErrorKind::MissingAnnotation, path, what + " lacks a `concept` annotation");
  if (!is_valid_iri(c->iri))
    throw Error(ErrorKind::InvalidIri, path, what + ": `" + c->iri + "`");
}

void check_service_params(const std::vector<Parameter>& params, const TypeTable& types,
                          const std::string& path) {
  std::set<std::string> names;
  for (const Parameter& p : params) {
    std::string ppath = path + "/" + (p.direction == Direction::Input ? "input[" : "output[") + p.name + "]";
    if (!names.insert(p.name).second)
      throw Error(ErrorKind::MalformedDocument, ppath, "duplicate parameter name");
    if (!resolve_type(types, p.typeName))
      throw Error(ErrorKind::UnresolvedReference, ppath, "unknown type `" + p.typeName + "`");
    check_service_concept(p.annotation, ppath, "parameter");
  }
}

}  // namespace

ServiceDescription parse_service(std::string_view bytes) {
  xml::Element root = xml::parse(bytes);
  if (root.name != "service")
    throw Error(ErrorKind::MalformedDocument, "/", "expected <service>, got <" + root.name + ">");
  ServiceDescription s;
  s.id = require_attr(root, "id", "/service");
  std::string path = "/service[" + s.id + "]";
  s.endpoint = require_attr(root, "endpoint", path);
  s.wsdlLocation = require_attr(root, "wsdl", path);

  const xml::Element* iface = nullptr;
  for (const xml::Element& c : root.children) {
    if (c.name == "interface") {
      if (iface) throw Error(ErrorKind::MalformedDocument, path, "multiple <interface> elements");
      iface = &c;
    } else if (c.name == "types") {
      s.types = markup::parse_types(c, path + "/types");
    } else if (c.name == "policy") {
      s.policy = markup::parse_policy(c, path + "/policy", nullptr);
    } else {
      throw Error(ErrorKind::MalformedDocument, path, "unexpected element <" + c.name + ">");
    }
  }
  if (!iface) throw Error(ErrorKind::MalformedDocument, path, "missing <interface>");

  s.interfaceName = require_attr(*iface, "name", path);
  std::string ipath = path + "/interface[" + s.interfaceName + "]";
  const std::string* ic = iface->attr("concept");
  std::optional<SemanticConcept> interfaceConcept;
  if (ic) interfaceConcept = SemanticConcept{*ic};
  check_service_concept(interfaceConcept, ipath, "interface");
  s.interfaceConcept = *interfaceConcept;

  std::set<std::string> opNames;
  for (const xml::Element& op : iface->children) {
    if (op.name != "operation")
      throw Error(ErrorKind::MalformedDocument, ipath, "unexpected element <" + op.name + ">");
    OperationDescription od;
    od.name = require_attr(op, "name", ipath);
    std::string opath = ipath + "/operation[" + od.name + "]";
    if (!opNames.insert(od.name).second)
      throw Error(ErrorKind::MalformedDocument, opath, "duplicate operation name");
    const std::string* oc = op.attr("concept");
    std::optional<SemanticConcept> fun;
    if (oc) fun = SemanticConcept{*oc};
    check_service_concept(fun, opath, "operation");
    od.functionalityConcept = *fun;
    for (const xml::Element& p : op.children) {
      if (p.name == "input")
        od.inputs.push_back(markup::parse_parameter(p, Direction::Input, opath));
      else if (p.name == "output")
        od.outputs.push_back(markup::parse_parameter(p, Direction::Output, opath));
      else
        throw Error(ErrorKind::MalformedDocument, opath, "unexpected element <" + p.name + ">");
    }
    check_service_params(od.inputs, s.types, opath);
    check_service_params(od.outputs, s.types, opath);
    s.operations.push_back(std::move(od));
  }
  return s;
}

std::string serialize_service(const ServiceDescription& s) {
  xml::Element root{"service"};
  root.set("id", s.id);
  root.set("endpoint", s.endpoint);
  root.set("wsdl", s.wsdlLocation);
  xml::Element iface{"interface"};
  iface.set("name", s.interfaceName);
  iface.set("concept", s.interfaceConcept.iri);
  for (const OperationDescription& od : s.operations) {
    xml::Element op{"operation"};
    op.set("name", od.name);
    op.set("concept", od.functionalityConcept.iri);
    for (const Parameter& p : od.inputs) op.children.push_back(markup::parameter_to_xml(p));
    for (const Parameter& p : od.outputs) op.children.push_back(markup::parameter_to_xml(p));
    iface.children.push_back(std::move(op));
  }
  root.children.push_back(std::move(iface));
  if (!s.types.empty()) root.children.push_back(markup::types_to_xml(s.types));
  if (s.policy) root.children.push_back(markup::policy_to_xml(*s.policy));
  return xml::serialize(root);
}

std::vector<ServiceDescription> load_registry(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir))
    throw Error(ErrorKind::IoError, dir.string(), "not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.size() > 12 && name.ends_with(".service.xml")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());  // deterministic error reporting

  std::vector<ServiceDescription> out;
  for (const fs::path& f : files) {
    std::ifstream in(f, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, f.string(), "cannot open");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
      out.push_back(parse_service(buf.str()));
    } catch (const Error& e) {
      throw Error(e.kind(), f.filename().string() + e.location(), e.what());
    }
  }
  std::sort(out.begin(), out.end(),
            [](const ServiceDescription& a, const ServiceDescription& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i].id == out[i - 1].id)
      throw Error(ErrorKind::DuplicateServiceId, dir.string(), out[i].id);
  return out;
}

}  // namespace bpws
