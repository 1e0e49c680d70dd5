#include "bpws/model.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "bpws/xml.hpp"
#include "markup.hpp"

namespace bpws {

std::optional<PrimitiveKind> primitive_from_name(std::string_view name) {
  if (name == "string") return PrimitiveKind::String;
  if (name == "decimal") return PrimitiveKind::Decimal;
  if (name == "integer") return PrimitiveKind::Integer;
  if (name == "boolean") return PrimitiveKind::Boolean;
  if (name == "date") return PrimitiveKind::Date;
  return std::nullopt;
}

const char* primitive_name(PrimitiveKind k) {
  switch (k) {
    case PrimitiveKind::String: return "string";
    case PrimitiveKind::Decimal: return "decimal";
    case PrimitiveKind::Integer: return "integer";
    case PrimitiveKind::Boolean: return "boolean";
    case PrimitiveKind::Date: return "date";
  }
  return "string";
}

const DataType* find_type(const TypeTable& table, std::string_view name) {
  for (const DataType& dt : table)
    if (dt.name == name) return &dt;
  return nullptr;
}

std::optional<DataType> resolve_type(const TypeTable& table, std::string_view name) {
  if (const DataType* dt = find_type(table, name)) return *dt;
  if (auto prim = primitive_from_name(name)) {
    DataType dt;
    dt.name = std::string(name);
    dt.primitive = *prim;
    return dt;
  }
  return std::nullopt;
}

namespace {

using markup::require_attr;

// ---------------------------------------------------------------- parsing

BehaviorNode parse_behavior_node(const xml::Element& el, const std::string& path);

std::vector<BehaviorNode> parse_behavior_children(const xml::Element& el, const std::string& path) {
  std::vector<BehaviorNode> out;
  for (const xml::Element& c : el.children) out.push_back(parse_behavior_node(c, path));
  return out;
}

BehaviorNode parse_behavior_node(const xml::Element& el, const std::string& path) {
  BehaviorNode node;
  if (el.name == "invoke") {
    node.kind = BehaviorKind::Invoke;
    node.activityId = require_attr(el, "activity", path);
  } else if (el.name == "sequence" || el.name == "parallel") {
    node.kind = el.name == "sequence" ? BehaviorKind::Sequence : BehaviorKind::Parallel;
    node.children = parse_behavior_children(el, path + "/" + el.name);
  } else if (el.name == "exclusive") {
    node.kind = BehaviorKind::Exclusive;
    std::string xpath = path + "/exclusive";
    for (const xml::Element& c : el.children) {
      if (c.name == "branch") {
        BehaviorNode::Branch br;
        br.condition = require_attr(c, "condition", xpath);
        if (c.children.size() != 1)
          throw Error(ErrorKind::MalformedDocument, xpath, "<branch> must contain exactly one node");
        br.body.push_back(parse_behavior_node(c.children.front(), xpath + "/branch"));
        node.branches.push_back(std::move(br));
      } else if (c.name == "else") {
        if (!node.elseBody.empty())
          throw Error(ErrorKind::MalformedDocument, xpath, "duplicate <else>");
        if (c.children.size() != 1)
          throw Error(ErrorKind::MalformedDocument, xpath, "<else> must contain exactly one node");
        node.elseBody.push_back(parse_behavior_node(c.children.front(), xpath + "/else"));
      } else {
        throw Error(ErrorKind::MalformedDocument, xpath, "unexpected element <" + c.name + ">");
      }
    }
    if (node.branches.empty())
      throw Error(ErrorKind::MalformedDocument, xpath, "<exclusive> needs at least one <branch>");
  } else {
    throw Error(ErrorKind::MalformedDocument, path, "unexpected behavior element <" + el.name + ">");
  }
  return node;
}

Activity parse_activity(const xml::Element& el, const std::string& parentPath,
                        std::vector<std::string>* warnings) {
  Activity a;
  a.id = require_attr(el, "id", parentPath);
  std::string path = parentPath + "/activity[" + a.id + "]";

  std::string kind = require_attr(el, "kind", path);
  if (kind == "task") a.kind = ActivityKind::Task;
  else if (kind == "subprocess") a.kind = ActivityKind::Subprocess;
  else throw Error(ErrorKind::MalformedDocument, path, "unknown activity kind `" + kind + "`");

  std::string binding = require_attr(el, "binding", path);
  if (binding == "internal") a.binding = Binding::Internal;
  else if (binding == "external") a.binding = Binding::External;
  else if (binding == "abstract") a.binding = Binding::Abstract;
  else throw Error(ErrorKind::MalformedDocument, path, "unknown binding `" + binding + "`");

  if (const std::string* role = el.attr("role")) a.role = *role;

  for (const xml::Element& c : el.children) {
    if (c.name == "domain") {
      a.domainConcept = SemanticConcept{require_attr(c, "concept", path)};
    } else if (c.name == "functionality") {
      a.functionalityConcept = SemanticConcept{require_attr(c, "concept", path)};
    } else if (c.name == "input") {
      a.inputs.push_back(markup::parse_parameter(c, Direction::Input, path));
    } else if (c.name == "output") {
      a.outputs.push_back(markup::parse_parameter(c, Direction::Output, path));
    } else if (c.name == "resource") {
      a.resources.push_back({require_attr(c, "name", path), c.text});
    } else if (c.name == "event") {
      Event ev;
      ev.name = require_attr(c, "name", path);
      std::string trig = require_attr(c, "trigger", path);
      if (trig == "start") ev.trigger = TriggerKind::Start;
      else if (trig == "interrupt") ev.trigger = TriggerKind::Interrupt;
      else if (trig == "terminate") ev.trigger = TriggerKind::Terminate;
      else throw Error(ErrorKind::MalformedDocument, path, "unknown trigger `" + trig + "`");
      a.events.push_back(std::move(ev));
    } else if (c.name == "policy") {
      a.policy = markup::parse_policy(c, path + "/policy", warnings);
    } else if (c.name == "activity") {
      a.children.push_back(parse_activity(c, path, warnings));
    } else if (c.name == "behavior") {
      if (!a.childBehavior.empty())
        throw Error(ErrorKind::MalformedDocument, path, "duplicate <behavior>");
      std::vector<BehaviorNode> body = parse_behavior_children(c, path + "/behavior");
      if (body.size() != 1)
        throw Error(ErrorKind::MalformedDocument, path, "<behavior> must contain exactly one node");
      a.childBehavior.push_back(std::move(body.front()));
    } else {
      throw Error(ErrorKind::MalformedDocument, path, "unexpected element <" + c.name + ">");
    }
  }
  return a;
}

ProcessDocument parse_process_element(const xml::Element& el, const std::string& parentPath,
                                      std::vector<std::string>* warnings) {
  if (el.name != "process")
    throw Error(ErrorKind::MalformedDocument, parentPath, "expected <process>, got <" + el.name + ">");
  ProcessDocument doc;
  doc.id = require_attr(el, "id", parentPath);
  std::string path = parentPath + "/process[" + doc.id + "]";
  doc.name = require_attr(el, "name", path);
  std::string kind = require_attr(el, "kind", path);
  if (kind == "macro") doc.kind = ProcessKind::Macro;
  else if (kind == "elementary") doc.kind = ProcessKind::Elementary;
  else if (kind == "micro") doc.kind = ProcessKind::Micro;
  else throw Error(ErrorKind::MalformedDocument, path, "unknown process kind `" + kind + "`");

  bool sawBehavior = false;
  for (const xml::Element& c : el.children) {
    if (c.name == "goal") {
      doc.goal = c.text;
    } else if (c.name == "role") {
      doc.roles.push_back(c.text);
    } else if (c.name == "types") {
      doc.types = markup::parse_types(c, path + "/types");
    } else if (c.name == "activity") {
      doc.activities.push_back(parse_activity(c, path, warnings));
    } else if (c.name == "behavior") {
      if (sawBehavior) throw Error(ErrorKind::MalformedDocument, path, "duplicate <behavior>");
      std::vector<BehaviorNode> body = parse_behavior_children(c, path + "/behavior");
      if (body.size() != 1)
        throw Error(ErrorKind::MalformedDocument, path, "<behavior> must contain exactly one node");
      doc.behavior = std::move(body.front());
      sawBehavior = true;
    } else if (c.name == "process") {
      doc.childProcesses.push_back(parse_process_element(c, path, warnings));
    } else {
      throw Error(ErrorKind::MalformedDocument, path, "unexpected element <" + c.name + ">");
    }
  }
  if (!sawBehavior)
    throw Error(ErrorKind::MalformedDocument, path, "missing <behavior>");
  return doc;
}

// ------------------------------------------------------------ serializing

xml::Element behavior_node_to_xml(const BehaviorNode& n) {
  switch (n.kind) {
    case BehaviorKind::Invoke: {
      xml::Element el{"invoke"};
      el.set("activity", n.activityId);
      return el;
    }
    case BehaviorKind::Sequence:
    case BehaviorKind::Parallel: {
      xml::Element el{n.kind == BehaviorKind::Sequence ? "sequence" : "parallel"};
      for (const BehaviorNode& c : n.children) el.children.push_back(behavior_node_to_xml(c));
      return el;
    }
    case BehaviorKind::Exclusive: {
      xml::Element el{"exclusive"};
      for (const BehaviorNode::Branch& br : n.branches) {
        xml::Element be{"branch"};
        be.set("condition", br.condition);
        be.children.push_back(behavior_node_to_xml(br.body.front()));
        el.children.push_back(std::move(be));
      }
      if (!n.elseBody.empty()) {
        xml::Element ee{"else"};
        ee.children.push_back(behavior_node_to_xml(n.elseBody.front()));
        el.children.push_back(std::move(ee));
      }
      return el;
    }
  }
  return xml::Element{"invoke"};
}

xml::Element activity_to_xml(const Activity& a) {
  xml::Element el{"activity"};
  el.set("id", a.id);
  el.set("kind", a.kind == ActivityKind::Task ? "task" : "subprocess");
  el.set("binding", a.binding == Binding::Internal   ? "internal"
                    : a.binding == Binding::External ? "external"
                                                     : "abstract");
  if (!a.role.empty()) el.set("role", a.role);
  if (a.domainConcept) {
    xml::Element d{"domain"};
    d.set("concept", a.domainConcept->iri);
    el.children.push_back(std::move(d));
  }
  if (a.functionalityConcept) {
    xml::Element f{"functionality"};
    f.set("concept", a.functionalityConcept->iri);
    el.children.push_back(std::move(f));
  }
  for (const Parameter& p : a.inputs) el.children.push_back(markup::parameter_to_xml(p));
  for (const Parameter& p : a.outputs) el.children.push_back(markup::parameter_to_xml(p));
  for (const Resource& r : a.resources) {
    xml::Element re{"resource"};
    re.set("name", r.name);
    re.text = r.description;
    el.children.push_back(std::move(re));
  }
  for (const Event& ev : a.events) {
    xml::Element ee{"event"};
    ee.set("name", ev.name);
    ee.set("trigger", ev.trigger == TriggerKind::Start       ? "start"
                      : ev.trigger == TriggerKind::Interrupt ? "interrupt"
                                                             : "terminate");
    el.children.push_back(std::move(ee));
  }
  if (a.policy) el.children.push_back(markup::policy_to_xml(*a.policy));
  for (const Activity& c : a.children) el.children.push_back(activity_to_xml(c));
  if (!a.childBehavior.empty()) {
    xml::Element be{"behavior"};
    be.children.push_back(behavior_node_to_xml(a.childBehavior.front()));
    el.children.push_back(std::move(be));
  }
  return el;
}

xml::Element process_to_xml(const ProcessDocument& doc) {
  xml::Element el{"process"};
  el.set("id", doc.id);
  el.set("name", doc.name);
  el.set("kind", doc.kind == ProcessKind::Macro        ? "macro"
                 : doc.kind == ProcessKind::Elementary ? "elementary"
                                                       : "micro");
  xml::Element goal{"goal"};
  goal.text = doc.goal;
  el.children.push_back(std::move(goal));
  for (const std::string& r : doc.roles) {
    xml::Element re{"role"};
    re.text = r;
    el.children.push_back(std::move(re));
  }
  if (!doc.types.empty()) el.children.push_back(markup::types_to_xml(doc.types));
  for (const Activity& a : doc.activities) el.children.push_back(activity_to_xml(a));
  xml::Element be{"behavior"};
  be.children.push_back(behavior_node_to_xml(doc.behavior));
  el.children.push_back(std::move(be));
  for (const ProcessDocument& c : doc.childProcesses) el.children.push_back(process_to_xml(c));
  return el;
}

// ------------------------------------------------------------- validation

struct Validator {
  std::vector<Violation> violations;
  std::set<std::string> allIds;  // document-wide

  void add(ErrorKind kind, std::string path, std::string msg) {
    violations.push_back({kind, std::move(path), std::move(msg)});
  }

  void check_concept(const std::optional<SemanticConcept>& c, const std::string& path,
                     const std::string& what) {
    if (c && !is_valid_iri(c->iri)) add(ErrorKind::InvalidIri, path, what + ": `" + c->iri + "`");
  }

  void check_types(const TypeTable& types, const std::string& path) {
    std::set<std::string> names;
    for (const DataType& dt : types) {
      std::string tpath = path + "/type[" + dt.name + "]";
      if (!names.insert(dt.name).second) add(ErrorKind::InvariantViolation, tpath, "duplicate type name");
      std::set<std::string> fieldNames;
      for (const FieldDef& f : dt.fields) {
        if (!fieldNames.insert(f.name).second)
          add(ErrorKind::InvariantViolation, tpath, "duplicate field `" + f.name + "`");
        if (!resolve_type(types, f.typeName))
          add(ErrorKind::UnresolvedReference, tpath, "field `" + f.name + "` references unknown type `" + f.typeName + "`");
      }
    }
    // cycle detection over record field references
    for (const DataType& dt : types) {
      std::set<std::string> onPath;
      if (has_cycle(types, dt.name, onPath))
        add(ErrorKind::InvariantViolation, path + "/type[" + dt.name + "]", "recursive type cycle");
    }
  }

  bool has_cycle(const TypeTable& types, const std::string& name, std::set<std::string>& onPath) {
    if (!onPath.insert(name).second) return true;
    if (const DataType* dt = find_type(types, name)) {
      for (const FieldDef& f : dt->fields)
        if (has_cycle(types, f.typeName, onPath)) return true;
    }
    onPath.erase(name);
    return false;
  }

  void check_parameters(const std::vector<Parameter>& params, const TypeTable& types,
                        bool conceptsRequired, const std::string& path) {
    for (const Parameter& p : params) {
      std::string ppath = path + "/" + (p.direction == Direction::Input ? "input[" : "output[") + p.name + "]";
      if (!resolve_type(types, p.typeName))
        add(ErrorKind::UnresolvedReference, ppath, "unknown type `" + p.typeName + "`");
      if (conceptsRequired && !p.annotation)
        add(ErrorKind::InvariantViolation, ppath, "parameter of abstract activity needs a concept");
      check_concept(p.annotation, ppath, "parameter concept");
    }
  }

  void collect_ids(const Activity& a, const std::string& path) {
    if (!allIds.insert(a.id).second)
      add(ErrorKind::InvariantViolation, path + "/activity[" + a.id + "]", "duplicate activity id");
    for (const Activity& c : a.children) collect_ids(c, path + "/activity[" + a.id + "]");
  }

  void check_activity(const Activity& a, const ProcessDocument& doc, const std::string& parentPath) {
    std::string path = parentPath + "/activity[" + a.id + "]";
    bool abstract = a.binding == Binding::Abstract;
    if (a.kind == ActivityKind::Task && !a.children.empty())
      add(ErrorKind::InvariantViolation, path, "task cannot have child activities");
    if (a.kind == ActivityKind::Subprocess && a.children.empty())
      add(ErrorKind::InvariantViolation, path, "subprocess needs child activities");
    if (abstract && a.kind == ActivityKind::Subprocess)
      add(ErrorKind::InvariantViolation, path, "abstract subprocess is not matchable; only abstract tasks are");
    if (abstract && !a.domainConcept)
      add(ErrorKind::InvariantViolation, path, "abstract activity needs a domain concept");
    if (abstract && !a.functionalityConcept)
      add(ErrorKind::InvariantViolation, path, "abstract activity needs a functionality concept");
    check_concept(a.domainConcept, path, "domain concept");
    check_concept(a.functionalityConcept, path, "functionality concept");
    if (!a.role.empty() &&
        std::find(doc.roles.begin(), doc.roles.end(), a.role) == doc.roles.end())
      add(ErrorKind::UnresolvedReference, path, "unknown role `" + a.role + "`");
    check_parameters(a.inputs, doc.types, abstract, path);
    check_parameters(a.outputs, doc.types, abstract, path);
    std::set<std::string> resourceNames;
    for (const Resource& r : a.resources)
      if (!resourceNames.insert(r.name).second)
        add(ErrorKind::InvariantViolation, path, "duplicate resource `" + r.name + "`");
    if (a.policy)
      for (const AlternativePolicy& alt : a.policy->alternatives)
        for (const Assertion& as : alt.assertions)
          if (!is_valid_iri(as.annotation.iri))
            add(ErrorKind::InvalidIri, path + "/policy", "assertion concept `" + as.annotation.iri + "`");
    for (const Activity& c : a.children) check_activity(c, doc, path);
    if (!a.childBehavior.empty()) {
      std::set<std::string> scope;
      collect_subtree_ids(a, scope);
      scope.erase(a.id);
      std::map<std::string, int> uses;
      check_behavior(a.childBehavior.front(), scope, uses, path + "/behavior");
    }
    if (a.kind == ActivityKind::Task && !a.childBehavior.empty())
      add(ErrorKind::InvariantViolation, path, "task cannot have a child behavior");
  }

  static void collect_subtree_ids(const Activity& a, std::set<std::string>& out) {
    out.insert(a.id);
    for (const Activity& c : a.children) collect_subtree_ids(c, out);
  }

  void check_behavior(const BehaviorNode& n, const std::set<std::string>& scope,
                      std::map<std::string, int>& uses, const std::string& path) {
    switch (n.kind) {
      case BehaviorKind::Invoke:
        if (!scope.contains(n.activityId))
          add(ErrorKind::UnresolvedReference, path, "invoke references unknown activity `" + n.activityId + "`");
        else if (++uses[n.activityId] == 2)
          add(ErrorKind::InvariantViolation, path, "activity `" + n.activityId + "` invoked more than once");
        break;
      case BehaviorKind::Sequence:
      case BehaviorKind::Parallel:
        for (const BehaviorNode& c : n.children) check_behavior(c, scope, uses, path);
        break;
      case BehaviorKind::Exclusive:
        for (const BehaviorNode::Branch& br : n.branches)
          check_behavior(br.body.front(), scope, uses, path);
        if (!n.elseBody.empty()) check_behavior(n.elseBody.front(), scope, uses, path);
        break;
    }
  }

  void check_document(const ProcessDocument& doc, const std::string& parentPath) {
    std::string path = parentPath + "/process[" + doc.id + "]";
    if (doc.goal.empty()) add(ErrorKind::InvariantViolation, path, "goal must be non-empty");
    if (doc.kind == ProcessKind::Micro && doc.roles.size() != 1)
      add(ErrorKind::InvariantViolation, path, "micro process needs exactly one role");
    for (const ProcessDocument& c : doc.childProcesses) {
      switch (doc.kind) {
        case ProcessKind::Macro:
          if (c.kind != ProcessKind::Elementary)
            add(ErrorKind::InvariantViolation, path, "macro child `" + c.id + "` must be elementary");
          break;
        case ProcessKind::Elementary:
          if (c.kind != ProcessKind::Micro)
            add(ErrorKind::InvariantViolation, path, "elementary child `" + c.id + "` must be micro");
          break;
        case ProcessKind::Micro:
          add(ErrorKind::InvariantViolation, path, "micro process cannot have child processes");
          break;
      }
    }
    check_types(doc.types, path + "/types");
    for (const Activity& a : doc.activities) collect_ids(a, path);
    for (const Activity& a : doc.activities) check_activity(a, doc, path);
    std::set<std::string> scope;
    for (const Activity& a : doc.activities) collect_subtree_ids(a, scope);
    std::map<std::string, int> uses;
    check_behavior(doc.behavior, scope, uses, path + "/behavior");
    for (const ProcessDocument& c : doc.childProcesses) check_document(c, path);
  }
};

}  // namespace

ProcessDocument parse_process_unchecked(std::string_view bytes) {
  xml::Element root = xml::parse(bytes);
  return parse_process_element(root, "", nullptr);
}

ProcessDocument parse_process(std::string_view bytes) {
  ProcessDocument doc = parse_process_unchecked(bytes);
  std::vector<Violation> violations = validate_process(doc);
  if (!violations.empty()) {
    const Violation& v = violations.front();
    throw Error(v.kind, v.path, v.message);
  }
  return doc;
}

std::string serialize_process(const ProcessDocument& doc) {
  return xml::serialize(process_to_xml(doc));
}

std::vector<Violation> validate_process(const ProcessDocument& doc) {
  Validator v;
  v.check_document(doc, "");
  std::stable_sort(v.violations.begin(), v.violations.end(),
                   [](const Violation& a, const Violation& b) {
                     return std::tie(a.path, a.message) < std::tie(b.path, b.message);
                   });
  return v.violations;
}

namespace {

void collect_abstract(const Activity& a, std::vector<const Activity*>& out) {
  if (a.binding == Binding::Abstract) out.push_back(&a);
  for (const Activity& c : a.children) collect_abstract(c, out);
}

}  // namespace

std::vector<const Activity*> abstract_activities(const ProcessDocument& doc) {
  std::vector<const Activity*> out;
  for (const Activity& a : doc.activities) collect_abstract(a, out);
  for (const ProcessDocument& c : doc.childProcesses)
    for (const Activity* a : abstract_activities(c)) out.push_back(a);
  return out;
}

}  // namespace bpws
