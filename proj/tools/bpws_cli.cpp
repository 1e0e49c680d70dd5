// Command-line front door: validate, discover, bind, abstract, explain.
//
// Exit codes: 0 success, 1 no candidate / unbound activity, 2 invalid input,
// 3 internal error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bpws/binder.hpp"
#include "bpws/matcher.hpp"
#include "bpws/model.hpp"
#include "bpws/ontology.hpp"
#include "bpws/registry.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNoCandidate = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitInternal = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw bpws::Error(bpws::ErrorKind::IoError, path, "cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw bpws::Error(bpws::ErrorKind::IoError, path, "cannot write");
  out << content;
}

struct Options {
  std::string processPath;
  std::string registryDir;
  std::string ontologyPath;
  std::string servicePath;
  std::string matchesPath;
  std::string activityId;
  std::string outPath;
  int tau = 3;
  std::vector<double> weights{0.2, 0.4, 0.2, 0.2};
  double policyWeight = 0.3;
  int assertionTau = 1;
  bool ignorePolicy = false;
  int rank = 1;
  int jobs = 1;
};

bpws::MatchConfig to_config(const Options& opt) {
  bpws::MatchConfig cfg;
  cfg.tau = opt.tau;
  cfg.weights = {opt.weights[0], opt.weights[1], opt.weights[2], opt.weights[3]};
  cfg.policyWeight = opt.policyWeight;
  cfg.assertionTau = opt.assertionTau;
  cfg.ignorePolicy = opt.ignorePolicy;
  cfg.jobs = opt.jobs;
  return cfg;
}

void check_config(const Options& opt) {
  if (opt.tau < 0) throw bpws::Error(bpws::ErrorKind::IoError, "--tau", "must be >= 0");
  if (opt.assertionTau < 0)
    throw bpws::Error(bpws::ErrorKind::IoError, "--assertion-tau", "must be >= 0");
  if (opt.rank < 1) throw bpws::Error(bpws::ErrorKind::IoError, "--rank", "must be >= 1");
  if (opt.jobs < 1) throw bpws::Error(bpws::ErrorKind::IoError, "--jobs", "must be >= 1");
  if (opt.weights.size() != 4)
    throw bpws::Error(bpws::ErrorKind::IoError, "--weights", "expected d,f,i,o");
  double sum = opt.weights[0] + opt.weights[1] + opt.weights[2] + opt.weights[3];
  if (std::fabs(sum - 1.0) > 1e-9)
    throw bpws::Error(bpws::ErrorKind::IoError, "--weights", "must sum to 1");
  if (opt.policyWeight < 0.0 || opt.policyWeight > 1.0)
    throw bpws::Error(bpws::ErrorKind::IoError, "--policy-weight", "must be in [0,1]");
}

int cmd_validate(const Options& opt) {
  bpws::ProcessDocument doc = bpws::parse_process_unchecked(slurp(opt.processPath));
  std::vector<bpws::Violation> violations = bpws::validate_process(doc);
  if (violations.empty()) {
    std::cout << "OK\n";
    return kExitOk;
  }
  for (const bpws::Violation& v : violations)
    std::cout << v.path << ": " << v.message << "\n";
  return kExitBadInput;
}

int cmd_discover(const Options& opt) {
  check_config(opt);
  bpws::ProcessDocument doc = bpws::parse_process(slurp(opt.processPath));
  std::vector<bpws::ServiceDescription> registry = bpws::load_registry(opt.registryDir);
  bpws::Ontology onto = bpws::load_ontology(slurp(opt.ontologyPath));
  bpws::DiscoveryReport report = bpws::discover(doc, registry, onto, to_config(opt));
  std::string serialized = bpws::serialize_report(report);
  if (opt.outPath.empty())
    std::cout << serialized;
  else
    spit(opt.outPath, serialized);
  for (const bpws::ActivityMatches& am : report.activities) {
    if (am.ranked.empty()) {
      std::cerr << "no candidate for activity " << am.activityId << "\n";
      return kExitNoCandidate;
    }
  }
  return kExitOk;
}

int cmd_abstract(const Options& opt) {
  bpws::ProcessDocument doc = bpws::parse_process(slurp(opt.processPath));
  std::string serialized = bpws::serialize_bpel(bpws::emit_abstract_bpel(doc));
  if (opt.outPath.empty())
    std::cout << serialized;
  else
    spit(opt.outPath, serialized);
  return kExitOk;
}

int cmd_bind(const Options& opt) {
  if (opt.rank < 1) throw bpws::Error(bpws::ErrorKind::IoError, "--rank", "must be >= 1");
  bpws::ProcessDocument doc = bpws::parse_process(slurp(opt.processPath));
  bpws::DiscoveryReport report = bpws::parse_report(slurp(opt.matchesPath));
  bpws::BpelDocument abstractDoc = bpws::emit_abstract_bpel(doc);
  try {
    bpws::BindingSelection sel = bpws::select_top(report, opt.rank);
    bpws::BpelDocument bound = bpws::bind(abstractDoc, sel);
    std::string serialized = bpws::serialize_bpel(bound);
    if (opt.outPath.empty())
      std::cout << serialized;
    else
      spit(opt.outPath, serialized);
    return kExitOk;
  } catch (const bpws::Error& e) {
    switch (e.kind()) {
      case bpws::ErrorKind::NoCandidate:
      case bpws::ErrorKind::UnboundActivity:
        std::cerr << e.what() << "\n";
        return kExitNoCandidate;
      default:
        throw;
    }
  }
}

void print_stage(const bpws::StageRecord& rec, const std::string& indent) {
  std::cout << indent << "stage " << bpws::stage_name(rec.stage) << ":";
  if (!rec.evaluated) {
    std::cout << " skipped\n";
    return;
  }
  std::cout << " distances=";
  for (std::size_t i = 0; i < rec.distances.size(); ++i) {
    if (i) std::cout << ",";
    if (rec.distances[i].reachable)
      std::cout << rec.distances[i].value;
    else
      std::cout << "unreachable";
  }
  if (rec.distances.empty()) std::cout << "-";
  std::cout << " similarities=";
  for (std::size_t i = 0; i < rec.similarities.size(); ++i) {
    if (i) std::cout << ",";
    std::cout << bpws::format_score(rec.similarities[i]);
  }
  if (rec.similarities.empty()) std::cout << "-";
  std::cout << " verdict=" << (rec.pass ? "pass" : "fail") << "\n";
}

int cmd_explain(const Options& opt) {
  if (opt.tau < 0) throw bpws::Error(bpws::ErrorKind::IoError, "--tau", "must be >= 0");
  bpws::ProcessDocument doc = bpws::parse_process(slurp(opt.processPath));
  bpws::ServiceDescription svc = bpws::parse_service(slurp(opt.servicePath));
  bpws::Ontology onto = bpws::load_ontology(slurp(opt.ontologyPath));

  const bpws::Activity* target = nullptr;
  for (const bpws::Activity* a : bpws::abstract_activities(doc))
    if (a->id == opt.activityId) target = a;
  if (!target)
    throw bpws::Error(bpws::ErrorKind::UnknownActivity, opt.activityId,
                      "no abstract activity with this id");

  bpws::MatchConfig cfg;
  cfg.tau = opt.tau;
  bpws::MatchOutcome outcome = bpws::match_activity(*target, doc.types, svc, onto, cfg);

  std::cout << "activity " << target->id << " vs service " << svc.id << "\n";
  auto print_trace = [](const bpws::MatchTrace& trace, const std::string& indent) {
    for (const bpws::StageRecord& rec : trace.stages) print_stage(rec, indent);
  };
  for (const bpws::FailedMatch& fm : outcome.failures) {
    if (fm.operationName.empty()) {
      print_trace(fm.trace, "");
    } else {
      std::cout << "operation " << fm.operationName << ": no match\n";
      print_trace(fm.trace, "  ");
    }
  }
  for (const bpws::CandidateMatch& cm : outcome.candidates) {
    std::cout << "operation " << cm.operationName
              << ": match functionalScore=" << bpws::format_score(cm.functionalScore) << "\n";
    print_trace(cm.trace, "  ");
    for (const bpws::AssignedPair& p : cm.inputAssignment.pairs)
      std::cout << "  input " << p.requiredName << " -> " << p.providedName
                << " similarity=" << bpws::format_score(p.similarity) << "\n";
    for (const bpws::AssignedPair& p : cm.outputAssignment.pairs)
      std::cout << "  output " << p.requiredName << " -> " << p.providedName
                << " similarity=" << bpws::format_score(p.similarity) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"abstract business process toolkit"};
  app.require_subcommand(1);
  Options opt;

  CLI::App* validate = app.add_subcommand("validate", "check a process document");
  validate->add_option("--process", opt.processPath)->required();

  CLI::App* discover = app.add_subcommand("discover", "match abstract activities against a registry");
  discover->add_option("--process", opt.processPath)->required();
  discover->add_option("--registry", opt.registryDir)->required();
  discover->add_option("--ontology", opt.ontologyPath)->required();
  discover->add_option("--tau", opt.tau);
  discover->add_option("--weights", opt.weights)->delimiter(',')->expected(1, 4);
  discover->add_option("--policy-weight", opt.policyWeight);
  discover->add_option("--assertion-tau", opt.assertionTau);
  discover->add_flag("--ignore-policy", opt.ignorePolicy);
  discover->add_option("--jobs", opt.jobs);
  discover->add_option("--out", opt.outPath);

  CLI::App* abstractCmd = app.add_subcommand("abstract", "emit the abstract BPEL document");
  abstractCmd->add_option("--process", opt.processPath)->required();
  abstractCmd->add_option("--out", opt.outPath);

  CLI::App* bindCmd = app.add_subcommand("bind", "rewrite abstract invokes using a matches report");
  bindCmd->add_option("--process", opt.processPath)->required();
  bindCmd->add_option("--matches", opt.matchesPath)->required();
  bindCmd->add_option("--rank", opt.rank);
  bindCmd->add_option("--out", opt.outPath);

  CLI::App* explain = app.add_subcommand("explain", "trace one activity/service pairing");
  explain->add_option("--process", opt.processPath)->required();
  explain->add_option("--activity", opt.activityId)->required();
  explain->add_option("--service", opt.servicePath)->required();
  explain->add_option("--ontology", opt.ontologyPath)->required();
  explain->add_option("--tau", opt.tau);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitBadInput;
  }

  try {
    if (validate->parsed()) return cmd_validate(opt);
    if (discover->parsed()) return cmd_discover(opt);
    if (abstractCmd->parsed()) return cmd_abstract(opt);
    if (bindCmd->parsed()) return cmd_bind(opt);
    if (explain->parsed()) return cmd_explain(opt);
  } catch (const bpws::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
