#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bpws/concept.hpp"
#include "bpws/ontology.hpp"

namespace bpws {

/// WS-Policy style atom: an assertion name plus its semantic annotation.
struct Assertion {
  std::string name;
  SemanticConcept annotation;

  auto operator<=>(const Assertion&) const = default;
};

/// One admissible assertion set.
struct AlternativePolicy {
  std::vector<Assertion> assertions;

  auto operator<=>(const AlternativePolicy&) const = default;
};

/// Choice among alternatives; satisfied when some alternative is covered.
struct Policy {
  std::vector<AlternativePolicy> alternatives;

  bool operator==(const Policy&) const = default;
};

/// Canonical form: assertions sorted by (name, concept), alternatives sorted
/// by their sorted assertion lists, duplicates removed at both levels.
Policy normalize(const Policy& p);

struct AssertionMatch {
  bool matched = false;
  double similarity = 0.0;
};

/// matched iff the annotation concepts are within `assertionTau` edges.
AssertionMatch assertion_matches(const Assertion& required, const Assertion& provided,
                                 const Ontology& o, int assertionTau);

enum class PolicyVerdict { NotEvaluated, Failed, Scored };

struct PolicyScore {
  PolicyVerdict verdict = PolicyVerdict::NotEvaluated;
  double score = 0.0;

  static PolicyScore not_evaluated() { return {PolicyVerdict::NotEvaluated, 0.0}; }
  static PolicyScore failed() { return {PolicyVerdict::Failed, 0.0}; }
  static PolicyScore of(double s) { return {PolicyVerdict::Scored, s}; }

  bool operator==(const PolicyScore&) const = default;
};

/// Failed unless every required assertion matches a distinct provided one;
/// otherwise the best mean matched similarity, scaled by |R|/|P| so that
/// unrequested provider assertions lower the score.
PolicyScore alternative_satisfies(const AlternativePolicy& required,
                                  const AlternativePolicy& provided, const Ontology& o,
                                  int assertionTau);

/// NotEvaluated when the activity declares no policy; Failed when it does and
/// the service has none or no alternative pair satisfies; else the maximum
/// alternative_satisfies score over all pairs.
PolicyScore policy_satisfaction(const std::optional<Policy>& required,
                                const std::optional<Policy>& provided, const Ontology& o,
                                int assertionTau);

}  // namespace bpws
