#include "bpws/binder.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "bpws/xml.hpp"
#include "markup.hpp"

namespace bpws {

namespace {

// ----------------------------------------------------------------- emit

const Activity* find_activity(const std::vector<Activity>& list, const std::string& id) {
  for (const Activity& a : list) {
    if (a.id == id) return &a;
    if (const Activity* hit = find_activity(a.children, id)) return hit;
  }
  return nullptr;
}

std::string variable_type(const std::vector<Parameter>& params, const std::string& fallback) {
  if (params.size() == 1) return params.front().typeName;
  return fallback;
}

struct Emitter {
  const ProcessDocument& doc;
  std::vector<BpelPartnerLink> partnerLinks;
  std::vector<BpelVariable> variables;
  std::set<std::string> linkNames;

  std::string role_link(const Activity& a) {
    std::string role = a.role;
    if (role.empty() && !doc.roles.empty()) role = doc.roles.front();
    std::string name = "pl_" + role;
    if (linkNames.insert(name).second) partnerLinks.push_back({name, "", ""});
    return name;
  }

  BpelNode invoke_node(const std::string& activityId) {
    const Activity* a = find_activity(doc.activities, activityId);
    if (!a)
      throw Error(ErrorKind::UnsupportedBehavior, activityId, "invoke of unknown activity");
    BpelNode node;
    node.kind = BpelKind::Invoke;
    BpelInvoke& inv = node.invoke;
    inv.name = a->id;
    inv.inputVariable = a->id + "In";
    inv.outputVariable = a->id + "Out";
    if (a->binding == Binding::Abstract) {
      inv.abstract_ = true;
      inv.partnerLink = kAbstractPartnerLink;
    } else {
      inv.partnerLink = role_link(*a);
      inv.operation = a->id;
    }
    variables.push_back({inv.inputVariable, variable_type(a->inputs, a->id + "InType")});
    variables.push_back({inv.outputVariable, variable_type(a->outputs, a->id + "OutType")});
    return node;
  }

  BpelNode map_node(const BehaviorNode& n) {
    BpelNode out;
    switch (n.kind) {
      case BehaviorKind::Invoke:
        return invoke_node(n.activityId);
      case BehaviorKind::Sequence:
      case BehaviorKind::Parallel:
        out.kind = n.kind == BehaviorKind::Sequence ? BpelKind::Sequence : BpelKind::Flow;
        for (const BehaviorNode& c : n.children) out.children.push_back(map_node(c));
        return out;
      case BehaviorKind::Exclusive:
        out.kind = BpelKind::If;
        for (const BehaviorNode::Branch& br : n.branches) {
          BpelNode::Branch b;
          b.condition = br.condition;
          b.body.push_back(map_node(br.body.front()));
          out.branches.push_back(std::move(b));
        }
        if (!n.elseBody.empty()) out.elseBody.push_back(map_node(n.elseBody.front()));
        return out;
    }
    throw Error(ErrorKind::UnsupportedBehavior, doc.id, "unknown behavior node kind");
  }
};

}  // namespace

BpelDocument emit_abstract_bpel(const ProcessDocument& doc) {
  Emitter em{doc, {}, {}, {}};
  BpelDocument out;
  out.processName = doc.name;
  out.body = em.map_node(doc.behavior);
  out.partnerLinks = std::move(em.partnerLinks);
  out.variables = std::move(em.variables);
  return out;
}

// ------------------------------------------------------------------ bind

namespace {

void for_each_invoke(BpelNode& n, const std::function<void(BpelInvoke&)>& fn) {
  if (n.kind == BpelKind::Invoke) {
    fn(n.invoke);
    return;
  }
  for (BpelNode& c : n.children) for_each_invoke(c, fn);
  for (BpelNode::Branch& br : n.branches) for_each_invoke(br.body.front(), fn);
  if (!n.elseBody.empty()) for_each_invoke(n.elseBody.front(), fn);
}

void for_each_invoke(const BpelNode& n, const std::function<void(const BpelInvoke&)>& fn) {
  for_each_invoke(const_cast<BpelNode&>(n), [&](BpelInvoke& inv) { fn(inv); });
}

}  // namespace

std::vector<std::string> abstract_invokes(const BpelDocument& doc) {
  std::vector<std::string> out;
  for_each_invoke(doc.body, [&](const BpelInvoke& inv) {
    if (inv.abstract_) out.push_back(inv.name);
  });
  return out;
}

BpelDocument bind(const BpelDocument& b, const BindingSelection& sel) {
  std::vector<std::string> abstractIds = abstract_invokes(b);
  if (abstractIds.empty())
    throw Error(ErrorKind::AlreadyBound, b.processName, "document has no abstract invokes");
  std::set<std::string> abstractSet(abstractIds.begin(), abstractIds.end());
  for (const auto& [id, svc] : sel.entries)
    if (!abstractSet.contains(id))
      throw Error(ErrorKind::UnknownActivity, id, "selection matches no abstract invoke");
  for (const std::string& id : abstractIds)
    if (!sel.entries.contains(id))
      throw Error(ErrorKind::UnboundActivity, id, "abstract invoke without a selection");

  BpelDocument out = b;
  std::set<std::string> boundServices;
  std::vector<const BoundService*> appendOrder;
  for_each_invoke(out.body, [&](BpelInvoke& inv) {
    if (!inv.abstract_) return;
    const BoundService& svc = sel.entries.at(inv.name);
    inv.partnerLink = "pl_" + svc.serviceId;
    inv.operation = svc.operationName;
    inv.interfaceName = svc.interfaceName;
    inv.abstract_ = false;
    if (boundServices.insert(svc.serviceId).second) appendOrder.push_back(&svc);
  });
  for (const BoundService* svc : appendOrder) {
    out.partnerLinks.push_back({"pl_" + svc->serviceId, svc->serviceId, svc->endpoint});
    out.imports.push_back({"urn:service:" + svc->serviceId, svc->wsdlLocation});
  }
  return out;
}

BindingSelection select_top(const DiscoveryReport& report, int rank) {
  if (rank < 1) throw Error(ErrorKind::NoCandidate, "select_top", "rank must be >= 1");
  BindingSelection sel;
  for (const ActivityMatches& am : report.activities) {
    if (am.ranked.size() < static_cast<std::size_t>(rank))
      throw Error(ErrorKind::NoCandidate, am.activityId,
                  "only " + std::to_string(am.ranked.size()) + " candidate(s), need rank " +
                      std::to_string(rank));
    const CandidateMatch& cm = am.ranked[static_cast<std::size_t>(rank) - 1];
    sel.entries[am.activityId] =
        {cm.serviceId, cm.operationName, cm.interfaceName, cm.endpoint, cm.wsdlLocation};
  }
  return sel;
}

// ------------------------------------------------------------------- I/O

namespace {

using markup::require_attr;

xml::Element bpel_node_to_xml(const BpelNode& n) {
  switch (n.kind) {
    case BpelKind::Invoke: {
      xml::Element el{"invoke"};
      el.set("name", n.invoke.name);
      el.set("partnerLink", n.invoke.partnerLink);
      el.set("operation", n.invoke.operation);
      el.set("interface", n.invoke.interfaceName);
      el.set("inputVariable", n.invoke.inputVariable);
      el.set("outputVariable", n.invoke.outputVariable);
      el.set("abstract", n.invoke.abstract_ ? "true" : "false");
      return el;
    }
    case BpelKind::Sequence:
    case BpelKind::Flow: {
      xml::Element el{n.kind == BpelKind::Sequence ? "sequence" : "flow"};
      for (const BpelNode& c : n.children) el.children.push_back(bpel_node_to_xml(c));
      return el;
    }
    case BpelKind::If: {
      xml::Element el{"if"};
      el.set("condition", n.branches.front().condition);
      el.children.push_back(bpel_node_to_xml(n.branches.front().body.front()));
      for (std::size_t i = 1; i < n.branches.size(); ++i) {
        xml::Element ee{"elseif"};
        ee.set("condition", n.branches[i].condition);
        ee.children.push_back(bpel_node_to_xml(n.branches[i].body.front()));
        el.children.push_back(std::move(ee));
      }
      if (!n.elseBody.empty()) {
        xml::Element ee{"else"};
        ee.children.push_back(bpel_node_to_xml(n.elseBody.front()));
        el.children.push_back(std::move(ee));
      }
      return el;
    }
  }
  return xml::Element{"sequence"};
}

BpelNode bpel_node_from_xml(const xml::Element& el, const std::string& path);

BpelNode single_child(const xml::Element& el, const std::string& path) {
  std::vector<const xml::Element*> body;
  for (const xml::Element& c : el.children) body.push_back(&c);
  if (body.size() != 1)
    throw Error(ErrorKind::MalformedDocument, path, "<" + el.name + "> must hold exactly one node");
  return bpel_node_from_xml(*body.front(), path);
}

BpelNode bpel_node_from_xml(const xml::Element& el, const std::string& path) {
  BpelNode n;
  if (el.name == "invoke") {
    n.kind = BpelKind::Invoke;
    n.invoke.name = require_attr(el, "name", path);
    n.invoke.partnerLink = require_attr(el, "partnerLink", path);
    n.invoke.operation = require_attr(el, "operation", path);
    n.invoke.interfaceName = require_attr(el, "interface", path);
    n.invoke.inputVariable = require_attr(el, "inputVariable", path);
    n.invoke.outputVariable = require_attr(el, "outputVariable", path);
    n.invoke.abstract_ = require_attr(el, "abstract", path) == "true";
  } else if (el.name == "sequence" || el.name == "flow") {
    n.kind = el.name == "sequence" ? BpelKind::Sequence : BpelKind::Flow;
    for (const xml::Element& c : el.children)
      n.children.push_back(bpel_node_from_xml(c, path + "/" + el.name));
  } else if (el.name == "if") {
    n.kind = BpelKind::If;
    std::string ipath = path + "/if";
    BpelNode::Branch first;
    first.condition = require_attr(el, "condition", ipath);
    bool sawBody = false;
    for (const xml::Element& c : el.children) {
      if (c.name == "elseif") {
        BpelNode::Branch br;
        br.condition = require_attr(c, "condition", ipath);
        br.body.push_back(single_child(c, ipath + "/elseif"));
        n.branches.push_back(std::move(br));
      } else if (c.name == "else") {
        n.elseBody.push_back(single_child(c, ipath + "/else"));
      } else {
        if (sawBody) throw Error(ErrorKind::MalformedDocument, ipath, "multiple <if> body nodes");
        first.body.push_back(bpel_node_from_xml(c, ipath));
        sawBody = true;
      }
    }
    if (!sawBody) throw Error(ErrorKind::MalformedDocument, ipath, "<if> missing its body node");
    n.branches.insert(n.branches.begin(), std::move(first));
  } else {
    throw Error(ErrorKind::MalformedDocument, path, "unexpected element <" + el.name + ">");
  }
  return n;
}

}  // namespace

std::string serialize_bpel(const BpelDocument& doc) {
  xml::Element root{"process"};
  root.set("name", doc.processName);
  for (const BpelImport& imp : doc.imports) {
    xml::Element el{"import"};
    el.set("namespace", imp.ns);
    el.set("location", imp.location);
    root.children.push_back(std::move(el));
  }
  xml::Element links{"partnerLinks"};
  for (const BpelPartnerLink& pl : doc.partnerLinks) {
    xml::Element el{"partnerLink"};
    el.set("name", pl.name);
    el.set("service", pl.serviceId);
    el.set("endpoint", pl.endpoint);
    links.children.push_back(std::move(el));
  }
  root.children.push_back(std::move(links));
  xml::Element vars{"variables"};
  for (const BpelVariable& v : doc.variables) {
    xml::Element el{"variable"};
    el.set("name", v.name);
    el.set("type", v.typeName);
    vars.children.push_back(std::move(el));
  }
  root.children.push_back(std::move(vars));
  root.children.push_back(bpel_node_to_xml(doc.body));
  return xml::serialize(root);
}

BpelDocument parse_bpel(std::string_view bytes) {
  xml::Element root = xml::parse(bytes);
  if (root.name != "process")
    throw Error(ErrorKind::MalformedDocument, "/", "expected <process>, got <" + root.name + ">");
  BpelDocument doc;
  doc.processName = require_attr(root, "name", "/process");
  std::string path = "/process[" + doc.processName + "]";
  bool sawBody = false;
  for (const xml::Element& c : root.children) {
    if (c.name == "import") {
      doc.imports.push_back({require_attr(c, "namespace", path), require_attr(c, "location", path)});
    } else if (c.name == "partnerLinks") {
      for (const xml::Element& pl : c.children)
        doc.partnerLinks.push_back({require_attr(pl, "name", path), require_attr(pl, "service", path),
                                    require_attr(pl, "endpoint", path)});
    } else if (c.name == "variables") {
      for (const xml::Element& v : c.children)
        doc.variables.push_back({require_attr(v, "name", path), require_attr(v, "type", path)});
    } else {
      if (sawBody) throw Error(ErrorKind::MalformedDocument, path, "multiple body nodes");
      doc.body = bpel_node_from_xml(c, path);
      sawBody = true;
    }
  }
  if (!sawBody) throw Error(ErrorKind::MalformedDocument, path, "missing body node");
  return doc;
}

std::string serialize_binding(const BindingSelection& sel) {
  xml::Element root{"binding"};
  for (const auto& [id, svc] : sel.entries) {
    xml::Element el{"bind"};
    el.set("activity", id);
    el.set("service", svc.serviceId);
    el.set("operation", svc.operationName);
    el.set("interface", svc.interfaceName);
    el.set("endpoint", svc.endpoint);
    el.set("wsdl", svc.wsdlLocation);
    root.children.push_back(std::move(el));
  }
  return xml::serialize(root);
}

BindingSelection parse_binding(std::string_view bytes) {
  xml::Element root = xml::parse(bytes);
  if (root.name != "binding")
    throw Error(ErrorKind::MalformedDocument, "/", "expected <binding>, got <" + root.name + ">");
  BindingSelection sel;
  for (const xml::Element& c : root.children) {
    if (c.name != "bind")
      throw Error(ErrorKind::MalformedDocument, "/binding", "unexpected element <" + c.name + ">");
    std::string id = require_attr(c, "activity", "/binding");
    sel.entries[id] = {require_attr(c, "service", "/binding"), require_attr(c, "operation", "/binding"),
                       require_attr(c, "interface", "/binding"), require_attr(c, "endpoint", "/binding"),
                       require_attr(c, "wsdl", "/binding")};
  }
  return sel;
}

namespace {

void collect_shape(const BpelNode& n, std::vector<BpelKind>& out) {
  out.push_back(n.kind);
  for (const BpelNode& c : n.children) collect_shape(c, out);
  for (const BpelNode::Branch& br : n.branches) collect_shape(br.body.front(), out);
  if (!n.elseBody.empty()) collect_shape(n.elseBody.front(), out);
}

}  // namespace

std::vector<BpelKind> control_shape(const BpelDocument& doc) {
  std::vector<BpelKind> out;
  collect_shape(doc.body, out);
  return out;
}

}  // namespace bpws
