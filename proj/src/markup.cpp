#include "markup.hpp"

#include "bpws/error.hpp"

namespace bpws::markup {

std::string require_attr(const xml::Element& el, const char* key, const std::string& path) {
  const std::string* v = el.attr(key);
  if (!v) throw Error(ErrorKind::MalformedDocument, path, std::string("missing attribute `") + key + "`");
  return *v;
}

TypeTable parse_types(const xml::Element& typesEl, const std::string& path) {
  TypeTable table;
  for (const xml::Element& t : typesEl.children) {
    if (t.name != "type")
      throw Error(ErrorKind::MalformedDocument, path, "unexpected element <" + t.name + "> in <types>");
    DataType dt;
    dt.name = require_attr(t, "name", path);
    std::string tpath = path + "/type[" + dt.name + "]";
    std::string kind = require_attr(t, "kind", tpath);
    if (kind == "record") {
      dt.isRecord = true;
      for (const xml::Element& f : t.children) {
        if (f.name != "field")
          throw Error(ErrorKind::MalformedDocument, tpath, "unexpected element <" + f.name + ">");
        dt.fields.push_back({require_attr(f, "name", tpath), require_attr(f, "type", tpath)});
      }
    } else {
      auto prim = primitive_from_name(kind);
      if (!prim)
        throw Error(ErrorKind::MalformedDocument, tpath, "unknown type kind `" + kind + "`");
      dt.primitive = *prim;
      if (!t.children.empty())
        throw Error(ErrorKind::MalformedDocument, tpath, "primitive type cannot have fields");
    }
    table.push_back(std::move(dt));
  }
  return table;
}

xml::Element types_to_xml(const TypeTable& types) {
  xml::Element el{"types"};
  for (const DataType& dt : types) {
    xml::Element t{"type"};
    t.set("name", dt.name);
    t.set("kind", dt.isRecord ? "record" : primitive_name(dt.primitive));
    for (const FieldDef& f : dt.fields) {
      xml::Element fe{"field"};
      fe.set("name", f.name);
      fe.set("type", f.typeName);
      t.children.push_back(std::move(fe));
    }
    el.children.push_back(std::move(t));
  }
  return el;
}

Parameter parse_parameter(const xml::Element& el, Direction dir, const std::string& path) {
  Parameter p;
  p.direction = dir;
  p.name = require_attr(el, "name", path);
  p.typeName = require_attr(el, "type", path + "/" + el.name + "[" + p.name + "]");
  if (const std::string* c = el.attr("concept")) p.annotation = SemanticConcept{*c};
  return p;
}

xml::Element parameter_to_xml(const Parameter& p) {
  xml::Element el{p.direction == Direction::Input ? "input" : "output"};
  el.set("name", p.name);
  el.set("type", p.typeName);
  if (p.annotation) el.set("concept", p.annotation->iri);
  return el;
}

Policy parse_policy(const xml::Element& el, const std::string& path,
                    std::vector<std::string>* warnings) {
  Policy policy;
  for (const xml::Element& alt : el.children) {
    if (alt.name != "alternative")
      throw Error(ErrorKind::MalformedDocument, path, "unexpected element <" + alt.name + "> in <policy>");
    AlternativePolicy ap;
    for (const xml::Element& as : alt.children) {
      if (as.name != "assertion")
        throw Error(ErrorKind::MalformedDocument, path, "unexpected element <" + as.name + "> in <alternative>");
      Assertion a;
      a.name = require_attr(as, "name", path);
      a.annotation = SemanticConcept{require_attr(as, "concept", path)};
      if (as.attr("optional") && warnings)
        warnings->push_back(path + ": `optional` assertion attribute is ignored");
      ap.assertions.push_back(std::move(a));
    }
    if (ap.assertions.empty())
      throw Error(ErrorKind::MalformedDocument, path, "empty <alternative>");
    policy.alternatives.push_back(std::move(ap));
  }
  if (policy.alternatives.empty())
    throw Error(ErrorKind::MalformedDocument, path, "empty <policy>");
  return policy;
}

xml::Element policy_to_xml(const Policy& p) {
  xml::Element el{"policy"};
  for (const AlternativePolicy& alt : p.alternatives) {
    xml::Element ae{"alternative"};
    for (const Assertion& a : alt.assertions) {
      xml::Element as{"assertion"};
      as.set("name", a.name);
      as.set("concept", a.annotation.iri);
      ae.children.push_back(std::move(as));
    }
    el.children.push_back(std::move(ae));
  }
  return el;
}

}  // namespace bpws::markup
