#include "bpws/matcher.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <thread>
#include <tuple>

#include "bpws/xml.hpp"
#include "markup.hpp"

namespace bpws {

std::string format_score(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::Domain: return "domain";
    case Stage::Functionality: return "functionality";
    case Stage::Inputs: return "inputs";
    case Stage::Outputs: return "outputs";
  }
  return "domain";
}

bool type_covers(const DataType& required, const DataType& provided,
                 const TypeTable& requiredTable, const TypeTable& providedTable) {
  if (!required.isRecord && !provided.isRecord) return required.primitive == provided.primitive;
  if (required.isRecord != provided.isRecord) return false;
  for (const FieldDef& rf : required.fields) {
    const FieldDef* pf = nullptr;
    for (const FieldDef& cand : provided.fields)
      if (cand.name == rf.name) { pf = &cand; break; }
    if (!pf) return false;
    auto rt = resolve_type(requiredTable, rf.typeName);
    auto pt = resolve_type(providedTable, pf->typeName);
    if (!rt || !pt) return false;
    if (!type_covers(*rt, *pt, requiredTable, providedTable)) return false;
  }
  return true;
}

namespace {

constexpr std::size_t kMaxArity = 8;

struct PairInfo {
  bool feasible = false;
  double similarity = 0.0;
};

// Depth-first search over injective assignments, keeping the best total
// similarity. Sizes are capped at 8, so full enumeration is cheap.
struct AssignmentSearch {
  const std::vector<std::vector<PairInfo>>& matrix;
  std::size_t providedCount;
  bool coverProvided;  // inputs: every provided parameter must be used too
  std::vector<int> current;
  std::vector<int> best;
  double bestSum = -1.0;

  void run(std::size_t idx, double sum, std::vector<bool>& used) {
    if (idx == matrix.size()) {
      if (coverProvided && matrix.size() != providedCount) return;
      if (sum > bestSum) {
        bestSum = sum;
        best = current;
      }
      return;
    }
    for (std::size_t j = 0; j < providedCount; ++j) {
      if (used[j] || !matrix[idx][j].feasible) continue;
      used[j] = true;
      current.push_back(static_cast<int>(j));
      run(idx + 1, sum + matrix[idx][j].similarity, used);
      current.pop_back();
      used[j] = false;
    }
  }
};

}  // namespace

std::optional<ParameterAssignment> assign_parameters(const std::vector<Parameter>& required,
                                                     const std::vector<Parameter>& provided,
                                                     const Ontology& o, int tau, Direction dir,
                                                     const TypeTable& requiredTable,
                                                     const TypeTable& providedTable) {
  if (required.size() > kMaxArity || provided.size() > kMaxArity)
    throw Error(ErrorKind::ArityTooLarge, "assign_parameters",
                "more than " + std::to_string(kMaxArity) + " parameters on one side");
  const bool coverProvided = dir == Direction::Input;
  if (coverProvided && required.size() != provided.size()) return std::nullopt;
  if (required.size() > provided.size()) return std::nullopt;

  if (required.empty()) {
    if (coverProvided && !provided.empty()) return std::nullopt;
    return ParameterAssignment{{}, 1.0};
  }

  std::vector<std::vector<PairInfo>> matrix(required.size(),
                                            std::vector<PairInfo>(provided.size()));
  for (std::size_t i = 0; i < required.size(); ++i) {
    for (std::size_t j = 0; j < provided.size(); ++j) {
      const Parameter& r = required[i];
      const Parameter& p = provided[j];
      if (!r.annotation || !p.annotation) continue;
      ConceptMatch cm = concept_match(o, *r.annotation, *p.annotation, tau);
      if (!cm.matched) continue;
      auto rt = resolve_type(requiredTable, r.typeName);
      auto pt = resolve_type(providedTable, p.typeName);
      if (!rt || !pt || !type_covers(*rt, *pt, requiredTable, providedTable)) continue;
      matrix[i][j] = {true, cm.similarity};
    }
  }

  AssignmentSearch search{matrix, provided.size(), coverProvided, {}, {}, -1.0};
  std::vector<bool> used(provided.size(), false);
  search.run(0, 0.0, used);
  if (search.bestSum < 0.0) return std::nullopt;

  ParameterAssignment out;
  for (std::size_t i = 0; i < required.size(); ++i) {
    std::size_t j = static_cast<std::size_t>(search.best[i]);
    out.pairs.push_back({required[i].name, provided[j].name, matrix[i][j].similarity});
  }
  out.meanSimilarity = search.bestSum / static_cast<double>(required.size());
  return out;
}

namespace {

StageRecord skipped_stage(Stage s) { return {s, false, {}, {}, false}; }

StageRecord concept_stage(Stage s, const Ontology& o, const SemanticConcept& required,
                          const SemanticConcept& provided, int tau) {
  ConceptMatch cm = concept_match(o, required, provided, tau);
  Distance d = edge_distance(o, required, provided);
  return {s, true, {d}, {cm.similarity}, cm.matched};
}

StageRecord assignment_stage(Stage s, const std::optional<ParameterAssignment>& a) {
  StageRecord rec{s, true, {}, {}, a.has_value()};
  if (a)
    for (const AssignedPair& p : a->pairs) rec.similarities.push_back(p.similarity);
  return rec;
}

}  // namespace

MatchOutcome match_activity(const Activity& activity, const TypeTable& activityTypes,
                            const ServiceDescription& service, const Ontology& o,
                            const MatchConfig& cfg) {
  if (activity.binding != Binding::Abstract || activity.kind != ActivityKind::Task)
    throw Error(ErrorKind::InvariantViolation, activity.id, "matching requires an abstract task");
  if (!activity.domainConcept || !activity.functionalityConcept)
    throw Error(ErrorKind::InvariantViolation, activity.id, "abstract task lacks concept annotations");

  MatchOutcome outcome;

  StageRecord domain =
      concept_stage(Stage::Domain, o, *activity.domainConcept, service.interfaceConcept, cfg.tau);
  if (!domain.pass && !cfg.fullEvaluation) {
    MatchTrace trace;
    trace.stages = {domain, skipped_stage(Stage::Functionality), skipped_stage(Stage::Inputs),
                    skipped_stage(Stage::Outputs)};
    outcome.failures.push_back({"", std::move(trace)});
    return outcome;
  }

  for (const OperationDescription& op : service.operations) {
    MatchTrace trace;
    trace.stages.push_back(domain);

    StageRecord fun = concept_stage(Stage::Functionality, o, *activity.functionalityConcept,
                                    op.functionalityConcept, cfg.tau);
    trace.stages.push_back(fun);
    bool failed = !fun.pass;

    std::optional<ParameterAssignment> inputs;
    if (!failed || cfg.fullEvaluation) {
      inputs = assign_parameters(activity.inputs, op.inputs, o, cfg.tau, Direction::Input,
                                 activityTypes, service.types);
      trace.stages.push_back(assignment_stage(Stage::Inputs, inputs));
      failed = failed || !inputs;
    } else {
      trace.stages.push_back(skipped_stage(Stage::Inputs));
    }

    std::optional<ParameterAssignment> outputs;
    if (!failed || cfg.fullEvaluation) {
      outputs = assign_parameters(activity.outputs, op.outputs, o, cfg.tau, Direction::Output,
                                  activityTypes, service.types);
      trace.stages.push_back(assignment_stage(Stage::Outputs, outputs));
      failed = failed || !outputs;
    } else {
      trace.stages.push_back(skipped_stage(Stage::Outputs));
    }

    if (failed || !domain.pass) {
      outcome.failures.push_back({op.name, std::move(trace)});
      continue;
    }

    CandidateMatch cm;
    cm.serviceId = service.id;
    cm.operationName = op.name;
    cm.interfaceName = service.interfaceName;
    cm.endpoint = service.endpoint;
    cm.wsdlLocation = service.wsdlLocation;
    cm.domainSim = domain.similarities.front();
    cm.functionalitySim = fun.similarities.front();
    cm.inputAssignment = *inputs;
    cm.outputAssignment = *outputs;
    cm.functionalScore = cfg.weights.domain * cm.domainSim +
                         cfg.weights.functionality * cm.functionalitySim +
                         cfg.weights.inputs * cm.inputAssignment.meanSimilarity +
                         cfg.weights.outputs * cm.outputAssignment.meanSimilarity;
    cm.trace = std::move(trace);
    outcome.candidates.push_back(std::move(cm));
  }
  return outcome;
}

namespace {

struct AbstractRef {
  const Activity* activity;
  const TypeTable* types;
};

void collect_abstract_refs(const Activity& a, const TypeTable& types, std::vector<AbstractRef>& out) {
  if (a.binding == Binding::Abstract) out.push_back({&a, &types});
  for (const Activity& c : a.children) collect_abstract_refs(c, types, out);
}

void collect_abstract_refs(const ProcessDocument& doc, std::vector<AbstractRef>& out) {
  for (const Activity& a : doc.activities) collect_abstract_refs(a, doc.types, out);
  for (const ProcessDocument& c : doc.childProcesses) collect_abstract_refs(c, out);
}

struct CellResult {
  MatchOutcome outcome;
  PolicyScore policy;
};

}  // namespace

DiscoveryReport discover(const ProcessDocument& doc, const std::vector<ServiceDescription>& registry,
                         const Ontology& o, const MatchConfig& cfg) {
  std::vector<AbstractRef> abstracts;
  collect_abstract_refs(doc, abstracts);

  const std::size_t cells = abstracts.size() * registry.size();
  std::vector<CellResult> results(cells);

  auto work_cell = [&](std::size_t cell) {
    std::size_t ai = cell / registry.size();
    std::size_t si = cell % registry.size();
    const AbstractRef& ar = abstracts[ai];
    const ServiceDescription& svc = registry[si];
    CellResult res;
    res.outcome = match_activity(*ar.activity, *ar.types, svc, o, cfg);
    res.policy = cfg.ignorePolicy
                     ? PolicyScore::not_evaluated()
                     : policy_satisfaction(ar.activity->policy, svc.policy, o, cfg.assertionTau);
    results[cell] = std::move(res);
  };

  int jobs = std::max(1, cfg.jobs);
  if (jobs == 1 || cells < 2) {
    for (std::size_t c = 0; c < cells; ++c) work_cell(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    int n = std::min<std::size_t>(static_cast<std::size_t>(jobs), cells);
    for (int t = 0; t < n; ++t)
      pool.emplace_back([&] {
        for (std::size_t c = next.fetch_add(1); c < cells; c = next.fetch_add(1)) work_cell(c);
      });
    for (std::thread& t : pool) t.join();
  }

  DiscoveryReport report;
  report.processId = doc.id;
  report.tau = cfg.tau;
  report.weights = cfg.weights;
  report.policyWeight = cfg.policyWeight;

  for (std::size_t ai = 0; ai < abstracts.size(); ++ai) {
    ActivityMatches am;
    am.activityId = abstracts[ai].activity->id;
    for (std::size_t si = 0; si < registry.size(); ++si) {
      CellResult& res = results[ai * registry.size() + si];
      for (CandidateMatch& cm : res.outcome.candidates) {
        cm.policy = res.policy;
        if (cm.policy.verdict == PolicyVerdict::Failed) {
          am.rejected.push_back({cm.serviceId, cm.operationName, cm.functionalScore, "policy"});
          continue;
        }
        double policyPart = cm.policy.verdict == PolicyVerdict::Scored ? cm.policy.score : 1.0;
        cm.totalScore = (1.0 - cfg.policyWeight) * cm.functionalScore + cfg.policyWeight * policyPart;
        am.ranked.push_back(std::move(cm));
      }
    }
    std::sort(am.ranked.begin(), am.ranked.end(), [](const CandidateMatch& a, const CandidateMatch& b) {
      if (a.totalScore != b.totalScore) return a.totalScore > b.totalScore;
      return std::tie(a.serviceId, a.operationName) < std::tie(b.serviceId, b.operationName);
    });
    std::sort(am.rejected.begin(), am.rejected.end(), [](const RejectedMatch& a, const RejectedMatch& b) {
      return std::tie(a.serviceId, a.operationName) < std::tie(b.serviceId, b.operationName);
    });
    report.activities.push_back(std::move(am));
  }
  return report;
}

// ------------------------------------------------------------- report I/O

namespace {

std::string join_distances(const std::vector<Distance>& ds) {
  std::string out;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (i) out += ',';
    out += ds[i].reachable ? std::to_string(ds[i].value) : "unreachable";
  }
  return out;
}

std::string join_scores(const std::vector<double>& vs) {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ',';
    out += format_score(vs[i]);
  }
  return out;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = s.find(',', start);
    out.push_back(s.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

xml::Element stage_to_xml(const StageRecord& rec) {
  xml::Element el{"stage"};
  el.set("name", stage_name(rec.stage));
  el.set("evaluated", rec.evaluated ? "true" : "false");
  el.set("verdict", rec.evaluated ? (rec.pass ? "pass" : "fail") : "skipped");
  el.set("distances", join_distances(rec.distances));
  el.set("similarities", join_scores(rec.similarities));
  return el;
}

xml::Element assignment_to_xml(const ParameterAssignment& a, const char* direction) {
  xml::Element el{"paramMap"};
  el.set("direction", direction);
  el.set("mean", format_score(a.meanSimilarity));
  for (const AssignedPair& p : a.pairs) {
    xml::Element pe{"pair"};
    pe.set("required", p.requiredName);
    pe.set("provided", p.providedName);
    pe.set("similarity", format_score(p.similarity));
    el.children.push_back(std::move(pe));
  }
  return el;
}

Stage stage_from_name(const std::string& n, const std::string& path) {
  if (n == "domain") return Stage::Domain;
  if (n == "functionality") return Stage::Functionality;
  if (n == "inputs") return Stage::Inputs;
  if (n == "outputs") return Stage::Outputs;
  throw Error(ErrorKind::MalformedDocument, path, "unknown stage `" + n + "`");
}

StageRecord stage_from_xml(const xml::Element& el, const std::string& path) {
  StageRecord rec;
  rec.stage = stage_from_name(markup::require_attr(el, "name", path), path);
  rec.evaluated = markup::require_attr(el, "evaluated", path) == "true";
  rec.pass = markup::require_attr(el, "verdict", path) == "pass";
  for (const std::string& d : split_list(markup::require_attr(el, "distances", path)))
    rec.distances.push_back(d == "unreachable" ? Distance::unreachable() : Distance::of(std::stoi(d)));
  for (const std::string& s : split_list(markup::require_attr(el, "similarities", path)))
    rec.similarities.push_back(std::stod(s));
  return rec;
}

ParameterAssignment assignment_from_xml(const xml::Element& el, const std::string& path) {
  ParameterAssignment a;
  a.meanSimilarity = std::stod(markup::require_attr(el, "mean", path));
  for (const xml::Element& pe : el.children) {
    if (pe.name != "pair")
      throw Error(ErrorKind::MalformedDocument, path, "unexpected element <" + pe.name + ">");
    a.pairs.push_back({markup::require_attr(pe, "required", path),
                       markup::require_attr(pe, "provided", path),
                       std::stod(markup::require_attr(pe, "similarity", path))});
  }
  return a;
}

std::string weights_to_string(const Weights& w) {
  return format_score(w.domain) + "," + format_score(w.functionality) + "," +
         format_score(w.inputs) + "," + format_score(w.outputs);
}

}  // namespace

std::string serialize_report(const DiscoveryReport& report) {
  xml::Element root{"matches"};
  root.set("process", report.processId);
  root.set("tau", std::to_string(report.tau));
  root.set("weights", weights_to_string(report.weights));
  root.set("policyWeight", format_score(report.policyWeight));
  for (const ActivityMatches& am : report.activities) {
    xml::Element ae{"activity"};
    ae.set("id", am.activityId);
    int rank = 1;
    for (const CandidateMatch& cm : am.ranked) {
      xml::Element ce{"candidate"};
      ce.set("service", cm.serviceId);
      ce.set("operation", cm.operationName);
      ce.set("interface", cm.interfaceName);
      ce.set("endpoint", cm.endpoint);
      ce.set("wsdl", cm.wsdlLocation);
      ce.set("functionalScore", format_score(cm.functionalScore));
      ce.set("policyScore", cm.policy.verdict == PolicyVerdict::Scored ? format_score(cm.policy.score)
                                                                       : "none");
      ce.set("totalScore", format_score(cm.totalScore));
      ce.set("rank", std::to_string(rank++));
      for (const StageRecord& rec : cm.trace.stages) ce.children.push_back(stage_to_xml(rec));
      ce.children.push_back(assignment_to_xml(cm.inputAssignment, "input"));
      ce.children.push_back(assignment_to_xml(cm.outputAssignment, "output"));
      ae.children.push_back(std::move(ce));
    }
    if (!am.rejected.empty()) {
      xml::Element re{"rejected"};
      for (const RejectedMatch& rm : am.rejected) {
        xml::Element ce{"candidate"};
        ce.set("service", rm.serviceId);
        ce.set("operation", rm.operationName);
        ce.set("functionalScore", format_score(rm.functionalScore));
        ce.set("reason", rm.reason);
        re.children.push_back(std::move(ce));
      }
      ae.children.push_back(std::move(re));
    }
    root.children.push_back(std::move(ae));
  }
  return xml::serialize(root);
}

DiscoveryReport parse_report(std::string_view bytes) {
  xml::Element root = xml::parse(bytes);
  if (root.name != "matches")
    throw Error(ErrorKind::MalformedDocument, "/", "expected <matches>, got <" + root.name + ">");
  DiscoveryReport report;
  std::string path = "/matches";
  report.processId = markup::require_attr(root, "process", path);
  report.tau = std::stoi(markup::require_attr(root, "tau", path));
  std::vector<std::string> w = split_list(markup::require_attr(root, "weights", path));
  if (w.size() != 4) throw Error(ErrorKind::MalformedDocument, path, "weights must have 4 entries");
  report.weights = {std::stod(w[0]), std::stod(w[1]), std::stod(w[2]), std::stod(w[3])};
  report.policyWeight = std::stod(markup::require_attr(root, "policyWeight", path));

  for (const xml::Element& ae : root.children) {
    if (ae.name != "activity")
      throw Error(ErrorKind::MalformedDocument, path, "unexpected element <" + ae.name + ">");
    ActivityMatches am;
    am.activityId = markup::require_attr(ae, "id", path);
    std::string apath = path + "/activity[" + am.activityId + "]";
    for (const xml::Element& ce : ae.children) {
      if (ce.name == "rejected") {
        for (const xml::Element& rj : ce.children)
          am.rejected.push_back({markup::require_attr(rj, "service", apath),
                                 markup::require_attr(rj, "operation", apath),
                                 std::stod(markup::require_attr(rj, "functionalScore", apath)),
                                 markup::require_attr(rj, "reason", apath)});
        continue;
      }
      if (ce.name != "candidate")
        throw Error(ErrorKind::MalformedDocument, apath, "unexpected element <" + ce.name + ">");
      CandidateMatch cm;
      cm.serviceId = markup::require_attr(ce, "service", apath);
      cm.operationName = markup::require_attr(ce, "operation", apath);
      cm.interfaceName = markup::require_attr(ce, "interface", apath);
      cm.endpoint = markup::require_attr(ce, "endpoint", apath);
      cm.wsdlLocation = markup::require_attr(ce, "wsdl", apath);
      cm.functionalScore = std::stod(markup::require_attr(ce, "functionalScore", apath));
      std::string ps = markup::require_attr(ce, "policyScore", apath);
      cm.policy = ps == "none" ? PolicyScore::not_evaluated() : PolicyScore::of(std::stod(ps));
      cm.totalScore = std::stod(markup::require_attr(ce, "totalScore", apath));
      for (const xml::Element& child : ce.children) {
        if (child.name == "stage") {
          cm.trace.stages.push_back(stage_from_xml(child, apath));
        } else if (child.name == "paramMap") {
          if (markup::require_attr(child, "direction", apath) == "input")
            cm.inputAssignment = assignment_from_xml(child, apath);
          else
            cm.outputAssignment = assignment_from_xml(child, apath);
        } else {
          throw Error(ErrorKind::MalformedDocument, apath, "unexpected element <" + child.name + ">");
        }
      }
      if (cm.trace.stages.size() == 4) {
        if (!cm.trace.stages[0].similarities.empty())
          cm.domainSim = cm.trace.stages[0].similarities.front();
        if (!cm.trace.stages[1].similarities.empty())
          cm.functionalitySim = cm.trace.stages[1].similarities.front();
      }
      am.ranked.push_back(std::move(cm));
    }
    report.activities.push_back(std::move(am));
  }
  return report;
}

}  // namespace bpws
