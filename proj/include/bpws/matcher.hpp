#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bpws/model.hpp"
#include "bpws/ontology.hpp"
#include "bpws/registry.hpp"

namespace bpws {

/// Formats a score with exactly 6 decimal digits.
std::string format_score(double v);

enum class Stage { Domain, Functionality, Inputs, Outputs };

const char* stage_name(Stage s);

struct StageRecord {
  Stage stage = Stage::Domain;
  bool evaluated = false;
  std::vector<Distance> distances;
  std::vector<double> similarities;
  bool pass = false;

  bool operator==(const StageRecord&) const = default;
};

/// Four stage records in the fixed order domain, functionality, inputs,
/// outputs; after the first fail all later stages stay evaluated=false.
struct MatchTrace {
  std::vector<StageRecord> stages;

  bool operator==(const MatchTrace&) const = default;
};

struct AssignedPair {
  std::string requiredName;
  std::string providedName;
  double similarity = 0.0;

  bool operator==(const AssignedPair&) const = default;
};

struct ParameterAssignment {
  std::vector<AssignedPair> pairs;
  double meanSimilarity = 1.0;

  bool operator==(const ParameterAssignment&) const = default;
};

struct Weights {
  double domain = 0.2;
  double functionality = 0.4;
  double inputs = 0.2;
  double outputs = 0.2;

  double sum() const { return domain + functionality + inputs + outputs; }
  bool operator==(const Weights&) const = default;
};

struct CandidateMatch {
  std::string serviceId;
  std::string operationName;
  std::string interfaceName;
  std::string endpoint;
  std::string wsdlLocation;
  double domainSim = 0.0;
  double functionalitySim = 0.0;
  ParameterAssignment inputAssignment;
  ParameterAssignment outputAssignment;
  double functionalScore = 0.0;
  PolicyScore policy;
  double totalScore = 0.0;
  MatchTrace trace;

  bool operator==(const CandidateMatch&) const = default;
};

struct FailedMatch {
  std::string operationName;  // empty for a domain-stage failure
  MatchTrace trace;

  bool operator==(const FailedMatch&) const = default;
};

struct MatchOutcome {
  std::vector<CandidateMatch> candidates;  // one per passing operation
  std::vector<FailedMatch> failures;

  bool operator==(const MatchOutcome&) const = default;
};

/// True iff provided structurally covers required: equal primitive kinds, or
/// records where every required field exists in provided with a covering
/// type. Extra provided fields are allowed.
bool type_covers(const DataType& required, const DataType& provided,
                 const TypeTable& requiredTable, const TypeTable& providedTable);

/// Exhaustive optimal injective assignment of required onto provided
/// parameters. Inputs additionally demand that every provided parameter is
/// covered. Throws ArityTooLarge above 8 parameters on either side; returns
/// nullopt when no feasible assignment exists.
std::optional<ParameterAssignment> assign_parameters(const std::vector<Parameter>& required,
                                                     const std::vector<Parameter>& provided,
                                                     const Ontology& o, int tau, Direction dir,
                                                     const TypeTable& requiredTable,
                                                     const TypeTable& providedTable);

struct MatchConfig {
  int tau = 3;
  Weights weights;
  double policyWeight = 0.3;
  int assertionTau = 1;
  bool ignorePolicy = false;
  bool fullEvaluation = false;  // debug: run all stages even after a failure
  int jobs = 1;
};

/// Hierarchical matching of one abstract task against one service: domain,
/// then per operation functionality, input assignment, output assignment.
/// Any failing stage short-circuits (unless cfg.fullEvaluation).
MatchOutcome match_activity(const Activity& activity, const TypeTable& activityTypes,
                            const ServiceDescription& service, const Ontology& o,
                            const MatchConfig& cfg);

struct RejectedMatch {
  std::string serviceId;
  std::string operationName;
  double functionalScore = 0.0;
  std::string reason;

  bool operator==(const RejectedMatch&) const = default;
};

struct ActivityMatches {
  std::string activityId;
  std::vector<CandidateMatch> ranked;
  std::vector<RejectedMatch> rejected;

  bool operator==(const ActivityMatches&) const = default;
};

struct DiscoveryReport {
  std::string processId;
  int tau = 3;
  Weights weights;
  double policyWeight = 0.3;
  std::vector<ActivityMatches> activities;

  bool operator==(const DiscoveryReport&) const = default;
};

/// Full discovery over every abstract activity of a valid document. Ranking
/// is descending totalScore with (serviceId, operationName) tie-break;
/// policy-failed candidates land in `rejected`. Deterministic for any jobs
/// count.
DiscoveryReport discover(const ProcessDocument& doc, const std::vector<ServiceDescription>& registry,
                         const Ontology& o, const MatchConfig& cfg);

std::string serialize_report(const DiscoveryReport& report);
DiscoveryReport parse_report(std::string_view bytes);

}  // namespace bpws
