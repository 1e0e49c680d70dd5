// End-to-end acceptance checks. Each criterion prints exactly one PASS/FAIL
// line; the process exits non-zero when any of them fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bpws/binder.hpp"
#include "bpws/matcher.hpp"
#include "bpws/model.hpp"
#include "bpws/ontology.hpp"
#include "bpws/policy.hpp"
#include "bpws/registry.hpp"

using namespace bpws;
namespace fs = std::filesystem;

namespace {

std::string fixture(const std::string& rel) { return std::string(BPWS_FIXTURES_DIR) + "/" + rel; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(BPWS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  if (status < 0) return -1;
#ifdef WIFEXITED
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return -1;
#else
  return status;
#endif
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / "bpws-acceptance") {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

// ------------------------------------------------------------ random inputs

SemanticConcept pool_concept(int i) {
  return {"http://onto.example/rand#c" + std::to_string(i)};
}

Ontology random_ontology(std::mt19937& rng, int n, int m) {
  Ontology o;
  for (int i = 0; i < n; ++i) o.add_concept(pool_concept(i));
  for (int e = 0; e < m; ++e) {
    int a = std::uniform_int_distribution<int>(0, n - 1)(rng);
    int b = std::uniform_int_distribution<int>(0, n - 1)(rng);
    if (a != b) o.add_edge(pool_concept(a), pool_concept(b));
  }
  return o;
}

SemanticConcept random_concept(std::mt19937& rng, int n) {
  return pool_concept(std::uniform_int_distribution<int>(0, n - 1)(rng));
}

std::vector<Parameter> random_params(std::mt19937& rng, int n, int maxLen, Direction dir) {
  const char* primitives[] = {"decimal", "string"};
  std::vector<Parameter> out;
  int len = std::uniform_int_distribution<int>(0, maxLen)(rng);
  for (int i = 0; i < len; ++i) {
    Parameter p;
    p.name = (dir == Direction::Input ? "in" : "out") + std::to_string(i);
    p.direction = dir;
    p.typeName = primitives[std::uniform_int_distribution<int>(0, 1)(rng)];
    p.annotation = random_concept(rng, n);
    out.push_back(p);
  }
  return out;
}

Activity random_abstract_activity(std::mt19937& rng, int n) {
  Activity a;
  a.id = "A";
  a.kind = ActivityKind::Task;
  a.binding = Binding::Abstract;
  a.domainConcept = random_concept(rng, n);
  a.functionalityConcept = random_concept(rng, n);
  a.inputs = random_params(rng, n, 3, Direction::Input);
  a.outputs = random_params(rng, n, 3, Direction::Output);
  return a;
}

ServiceDescription random_service(std::mt19937& rng, int n) {
  ServiceDescription s;
  s.id = "svc";
  s.endpoint = "https://svc.example/api";
  s.wsdlLocation = "https://svc.example/api?wsdl";
  s.interfaceName = "I";
  s.interfaceConcept = random_concept(rng, n);
  int ops = std::uniform_int_distribution<int>(1, 2)(rng);
  for (int i = 0; i < ops; ++i) {
    OperationDescription op;
    op.name = "op" + std::to_string(i);
    op.functionalityConcept = random_concept(rng, n);
    op.inputs = random_params(rng, n, 3, Direction::Input);
    op.outputs = random_params(rng, n, 3, Direction::Output);
    s.operations.push_back(op);
  }
  return s;
}

// -------------------------------------------------------------- criteria

bool scenario_end_to_end(const TempDir& tmp) {
  auto start = std::chrono::steady_clock::now();
  std::string matches = tmp.file("matches.xml");
  int code = run_cli("discover --process " + fixture("silver.process.xml") + " --registry " +
                     fixture("registry") + " --ontology " + fixture("finance.onto") + " --out " +
                     matches);
  if (code != 0) return false;

  DiscoveryReport report = parse_report(slurp(matches));
  if (report.activities.size() != 2) return false;
  const ActivityMatches& silver = report.activities[0];
  const ActivityMatches& fx = report.activities[1];
  if (silver.activityId != "GetRealTimeSilverPrice" || fx.activityId != "CurrenciesExchange")
    return false;
  if (silver.ranked.empty() || silver.ranked[0].serviceId != "fin-realtime-metals" ||
      format_score(silver.ranked[0].totalScore) != "1.000000")
    return false;
  if (fx.ranked.empty() || fx.ranked[0].serviceId != "fin-currency-exchange" ||
      format_score(fx.ranked[0].totalScore) != "1.000000")
    return false;
  bool rejectedUnsecured = false;
  for (const RejectedMatch& rm : silver.rejected)
    if (rm.serviceId == "fin-quotes-unsecured" && rm.reason == "policy") rejectedUnsecured = true;
  if (!rejectedUnsecured) return false;
  for (const ActivityMatches& am : report.activities) {
    for (const CandidateMatch& cm : am.ranked)
      if (cm.serviceId == "logistics-tracking") return false;
    for (const RejectedMatch& rm : am.rejected)
      if (rm.serviceId == "logistics-tracking") return false;
  }

  std::string bound = tmp.file("bound.xml");
  code = run_cli("bind --process " + fixture("silver.process.xml") + " --matches " + matches +
                 " --rank 1 --out " + bound);
  if (code != 0) return false;
  BpelDocument doc = parse_bpel(slurp(bound));
  if (!abstract_invokes(doc).empty()) return false;
  int newLinks = 0;
  for (const BpelPartnerLink& pl : doc.partnerLinks)
    if (!pl.serviceId.empty()) ++newLinks;
  if (newLinks != 2) return false;

  auto elapsed = std::chrono::steady_clock::now() - start;
  return elapsed < std::chrono::seconds(1);
}

bool distance_oracle_equivalence() {
  std::mt19937 rng(11);
  for (int iter = 0; iter < 200; ++iter) {
    int n = std::uniform_int_distribution<int>(1, 50)(rng);
    int m = std::uniform_int_distribution<int>(0, 150)(rng);
    std::vector<std::vector<int>> adj(n);
    Ontology o;
    for (int i = 0; i < n; ++i) o.add_concept(pool_concept(i));
    std::set<std::pair<int, int>> seen;
    for (int e = 0; e < m; ++e) {
      int a = std::uniform_int_distribution<int>(0, n - 1)(rng);
      int b = std::uniform_int_distribution<int>(0, n - 1)(rng);
      if (a == b) continue;
      o.add_edge(pool_concept(a), pool_concept(b));
      if (seen.insert({std::min(a, b), std::max(a, b)}).second) {
        adj[a].push_back(b);
        adj[b].push_back(a);
      }
    }
    for (int src = 0; src < n; ++src) {
      std::vector<int> dist(n, -1);
      std::queue<int> q;
      dist[src] = 0;
      q.push(src);
      while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : adj[u])
          if (dist[v] < 0) {
            dist[v] = dist[u] + 1;
            q.push(v);
          }
      }
      for (int dst = 0; dst < n; ++dst) {
        Distance d = edge_distance(o, pool_concept(src), pool_concept(dst));
        if (dist[dst] < 0) {
          if (d.reachable) return false;
        } else if (!d.reachable || d.value != dist[dst]) {
          return false;
        }
      }
    }
  }
  return true;
}

bool assignment_oracle_equivalence() {
  std::mt19937 rng(22);
  TypeTable table;
  for (int iter = 0; iter < 500; ++iter) {
    Ontology o = random_ontology(rng, 12, 16);
    Direction dir = iter % 2 ? Direction::Input : Direction::Output;
    auto required = random_params(rng, 12, 5, dir);
    auto provided = random_params(rng, 12, 5, dir);
    int tau = std::uniform_int_distribution<int>(0, 4)(rng);

    auto feasible = [&](const Parameter& r, const Parameter& p, double& sim) {
      if (!r.annotation || !p.annotation) return false;
      ConceptMatch cm = concept_match(o, *r.annotation, *p.annotation, tau);
      if (!cm.matched) return false;
      auto rt = resolve_type(table, r.typeName);
      auto pt = resolve_type(table, p.typeName);
      if (!rt || !pt || !type_covers(*rt, *pt, table, table)) return false;
      sim = cm.similarity;
      return true;
    };

    std::optional<double> want;
    if (!(dir == Direction::Input && required.size() != provided.size()) &&
        required.size() <= provided.size()) {
      if (required.empty()) {
        want = 1.0;
      } else {
        std::vector<std::size_t> idx(provided.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        double best = -1.0;
        do {
          double sum = 0.0;
          bool ok = true;
          for (std::size_t i = 0; i < required.size(); ++i) {
            double sim = 0.0;
            if (!feasible(required[i], provided[idx[i]], sim)) {
              ok = false;
              break;
            }
            sum += sim;
          }
          if (ok) best = std::max(best, sum / static_cast<double>(required.size()));
        } while (std::next_permutation(idx.begin(), idx.end()));
        if (best >= 0.0) want = best;
      }
    }

    auto got = assign_parameters(required, provided, o, tau, dir, table, table);
    if (got.has_value() != want.has_value()) return false;
    if (got && std::abs(got->meanSimilarity - *want) > 1e-12) return false;
  }
  return true;
}

bool trace_soundness_and_pruning_neutrality() {
  std::mt19937 rng(33);
  TypeTable table;
  for (int iter = 0; iter < 200; ++iter) {
    Ontology o = random_ontology(rng, 14, 18);
    Activity a = random_abstract_activity(rng, 14);
    ServiceDescription s = random_service(rng, 14);
    MatchConfig cfg;
    cfg.tau = std::uniform_int_distribution<int>(0, 4)(rng);
    MatchOutcome fast = match_activity(a, table, s, o, cfg);
    MatchConfig full = cfg;
    full.fullEvaluation = true;
    MatchOutcome slow = match_activity(a, table, s, o, full);

    auto sound = [](const MatchTrace& t) {
      bool failedSeen = false;
      for (const StageRecord& rec : t.stages) {
        if (failedSeen && rec.evaluated) return false;
        if (rec.evaluated && !rec.pass) failedSeen = true;
      }
      return true;
    };
    for (const CandidateMatch& cm : fast.candidates)
      if (!sound(cm.trace)) return false;
    for (const FailedMatch& fm : fast.failures)
      if (!sound(fm.trace)) return false;

    if (fast.candidates.size() != slow.candidates.size()) return false;
    for (std::size_t i = 0; i < fast.candidates.size(); ++i) {
      const CandidateMatch& x = fast.candidates[i];
      const CandidateMatch& y = slow.candidates[i];
      if (x.operationName != y.operationName) return false;
      if (format_score(x.functionalScore) != format_score(y.functionalScore)) return false;
      if (format_score(x.inputAssignment.meanSimilarity) !=
          format_score(y.inputAssignment.meanSimilarity))
        return false;
      if (format_score(x.outputAssignment.meanSimilarity) !=
          format_score(y.outputAssignment.meanSimilarity))
        return false;
    }
  }
  return true;
}

bool tau_monotonicity() {
  std::mt19937 rng(44);
  TypeTable table;
  for (int iter = 0; iter < 150; ++iter) {
    Ontology o = random_ontology(rng, 14, 18);
    Activity a = random_abstract_activity(rng, 14);
    ServiceDescription s = random_service(rng, 14);
    std::vector<std::set<std::string>> sets;
    for (int tau = 0; tau <= 4; ++tau) {
      MatchConfig cfg;
      cfg.tau = tau;
      MatchOutcome out = match_activity(a, table, s, o, cfg);
      std::set<std::string> ops;
      for (const CandidateMatch& cm : out.candidates) ops.insert(cm.operationName);
      sets.push_back(std::move(ops));
    }
    for (int tau = 0; tau < 4; ++tau)
      if (!std::includes(sets[tau + 1].begin(), sets[tau + 1].end(), sets[tau].begin(),
                         sets[tau].end()))
        return false;
  }
  return true;
}

bool policy_brute_force_equivalence() {
  std::mt19937 rng(55);
  auto random_policy = [&](int n) {
    Policy p;
    int alts = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int i = 0; i < alts; ++i) {
      AlternativePolicy alt;
      int len = std::uniform_int_distribution<int>(0, 4)(rng);
      for (int j = 0; j < len; ++j)
        alt.assertions.push_back(
            {"a" + std::to_string(std::uniform_int_distribution<int>(0, 2)(rng)),
             random_concept(rng, n)});
      p.alternatives.push_back(std::move(alt));
    }
    return p;
  };
  auto oracle_alt = [](const AlternativePolicy& required, const AlternativePolicy& provided,
                       const Ontology& o, int tau) -> PolicyScore {
    auto dedup = [](AlternativePolicy a) {
      std::sort(a.assertions.begin(), a.assertions.end());
      a.assertions.erase(std::unique(a.assertions.begin(), a.assertions.end()),
                         a.assertions.end());
      return a;
    };
    AlternativePolicy r = dedup(required), p = dedup(provided);
    if (r.assertions.size() > p.assertions.size()) return PolicyScore::failed();
    std::vector<std::size_t> idx(p.assertions.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    double best = -1.0;
    do {
      double sum = 0.0;
      bool ok = true;
      for (std::size_t i = 0; i < r.assertions.size(); ++i) {
        AssertionMatch m = assertion_matches(r.assertions[i], p.assertions[idx[i]], o, tau);
        if (!m.matched) {
          ok = false;
          break;
        }
        sum += m.similarity;
      }
      if (ok)
        best = std::max(best,
                        r.assertions.empty() ? 1.0 : sum / static_cast<double>(r.assertions.size()));
    } while (std::next_permutation(idx.begin(), idx.end()));
    if (best < 0.0) return PolicyScore::failed();
    double ratio = p.assertions.empty() ? 1.0
                                        : static_cast<double>(r.assertions.size()) /
                                              static_cast<double>(p.assertions.size());
    return PolicyScore::of(best * ratio);
  };

  for (int iter = 0; iter < 500; ++iter) {
    int n = 10;
    Ontology o = random_ontology(rng, n, 12);
    std::optional<Policy> required;
    std::optional<Policy> provided;
    if (std::uniform_int_distribution<int>(0, 9)(rng) != 0) required = random_policy(n);
    if (std::uniform_int_distribution<int>(0, 9)(rng) != 0) provided = random_policy(n);
    int tau = std::uniform_int_distribution<int>(0, 2)(rng);

    PolicyScore want = PolicyScore::not_evaluated();
    if (required) {
      want = PolicyScore::failed();
      if (provided) {
        for (const AlternativePolicy& ralt : required->alternatives) {
          for (const AlternativePolicy& palt : provided->alternatives) {
            PolicyScore s = oracle_alt(ralt, palt, o, tau);
            if (s.verdict == PolicyVerdict::Scored &&
                (want.verdict != PolicyVerdict::Scored || s.score > want.score))
              want = s;
          }
        }
      }
    }
    PolicyScore got = policy_satisfaction(required, provided, o, tau);
    if (got.verdict != want.verdict) return false;
    if (got.verdict == PolicyVerdict::Scored && got.score != want.score) return false;
  }
  return true;
}

bool determinism_and_round_trips(const TempDir& tmp) {
  std::string base = "discover --process " + fixture("silver.process.xml") + " --registry " +
                     fixture("registry") + " --ontology " + fixture("finance.onto");
  std::string a = tmp.file("run-a.xml"), b = tmp.file("run-b.xml"), c = tmp.file("run-c.xml");
  if (run_cli(base + " --out " + a) != 0) return false;
  if (run_cli(base + " --out " + b) != 0) return false;
  if (run_cli(base + " --jobs 8 --out " + c) != 0) return false;
  if (slurp(a) != slurp(b) || slurp(a) != slurp(c)) return false;

  auto stable = [](auto parse, auto serialize, const std::string& bytes) {
    auto first = parse(bytes);
    std::string once = serialize(first);
    auto second = parse(once);
    return second == first && serialize(second) == once;
  };

  for (const char* f : {"silver.process.xml", "minimal.process.xml"})
    if (!stable([](const std::string& s) { return parse_process(s); },
                [](const ProcessDocument& d) { return serialize_process(d); }, slurp(fixture(f))))
      return false;
  for (const auto& entry : fs::directory_iterator(fixture("registry"))) {
    if (entry.path().extension() != ".xml") continue;
    if (!stable([](const std::string& s) { return parse_service(s); },
                [](const ServiceDescription& d) { return serialize_service(d); },
                slurp(entry.path().string())))
      return false;
  }
  {
    DiscoveryReport first = parse_report(slurp(a));
    std::string once = serialize_report(first);
    if (serialize_report(parse_report(once)) != once) return false;
  }
  {
    ProcessDocument doc = parse_process(slurp(fixture("silver.process.xml")));
    BpelDocument emitted = emit_abstract_bpel(doc);
    if (!stable([](const std::string& s) { return parse_bpel(s); },
                [](const BpelDocument& d) { return serialize_bpel(d); }, serialize_bpel(emitted)))
      return false;
  }
  return true;
}

bool binding_contract() {
  ProcessDocument doc = parse_process(slurp(fixture("silver.process.xml")));
  Ontology o = load_ontology(slurp(fixture("finance.onto")));
  auto services = load_registry(fixture("registry"));
  DiscoveryReport report = discover(doc, services, o, MatchConfig{});
  BpelDocument emitted = emit_abstract_bpel(doc);
  BindingSelection sel = select_top(report, 1);
  BpelDocument bound = bind(emitted, sel);

  if (control_shape(bound) != control_shape(emitted)) return false;
  if (!abstract_invokes(bound).empty()) return false;
  if (abstract_invokes(emitted).size() != 2) return false;

  BindingSelection missing = sel;
  missing.entries.erase(missing.entries.begin());
  try {
    bind(emitted, missing);
    return false;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::UnboundActivity) return false;
  }
  try {
    bind(bound, sel);
    return false;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::AlreadyBound) return false;
  }
  return true;
}

int report(int index, const char* label, bool ok) {
  std::cout << "criterion " << index << " (" << label << "): " << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main() {
  TempDir tmp;
  int failures = 0;
  try {
    failures += report(1, "end-to-end scenario", scenario_end_to_end(tmp));
    failures += report(2, "distance oracle equivalence", distance_oracle_equivalence());
    failures += report(3, "assignment oracle equivalence", assignment_oracle_equivalence());
    failures += report(4, "short-circuit soundness", trace_soundness_and_pruning_neutrality());
    failures += report(5, "threshold monotonicity", tau_monotonicity());
    failures += report(6, "policy brute-force equivalence", policy_brute_force_equivalence());
    failures += report(7, "determinism and round trips", determinism_and_round_trips(tmp));
    failures += report(8, "binding contract", binding_contract());
  } catch (const std::exception& e) {
    std::cout << "acceptance run aborted: " << e.what() << "\n";
    return 1;
  }
  return failures == 0 ? 0 : 1;
}
