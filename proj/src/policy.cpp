#include "bpws/policy.hpp"

#include <algorithm>

namespace bpws {

Policy normalize(const Policy& p) {
  Policy out;
  for (const AlternativePolicy& alt : p.alternatives) {
    AlternativePolicy sorted = alt;
    std::sort(sorted.assertions.begin(), sorted.assertions.end());
    sorted.assertions.erase(std::unique(sorted.assertions.begin(), sorted.assertions.end()),
                            sorted.assertions.end());
    out.alternatives.push_back(std::move(sorted));
  }
  std::sort(out.alternatives.begin(), out.alternatives.end());
  out.alternatives.erase(std::unique(out.alternatives.begin(), out.alternatives.end()),
                         out.alternatives.end());
  return out;
}

AssertionMatch assertion_matches(const Assertion& required, const Assertion& provided,
                                 const Ontology& o, int assertionTau) {
  Distance d = edge_distance(o, required.annotation, provided.annotation);
  return {d.reachable && d.value <= assertionTau, similarity(d)};
}

namespace {

// Best mean similarity over injective required->provided matchings, or -1 if
// no full matching exists. Plain backtracking; alternative sizes are small.
double best_injection(const std::vector<Assertion>& required, const std::vector<Assertion>& provided,
                      const Ontology& o, int assertionTau, std::size_t idx,
                      std::vector<bool>& used, double simSum) {
  if (idx == required.size())
    return required.empty() ? 1.0 : simSum / static_cast<double>(required.size());
  double best = -1.0;
  for (std::size_t j = 0; j < provided.size(); ++j) {
    if (used[j]) continue;
    AssertionMatch m = assertion_matches(required[idx], provided[j], o, assertionTau);
    if (!m.matched) continue;
    used[j] = true;
    best = std::max(best, best_injection(required, provided, o, assertionTau, idx + 1, used,
                                         simSum + m.similarity));
    used[j] = false;
  }
  return best;
}

}  // namespace

PolicyScore alternative_satisfies(const AlternativePolicy& required,
                                  const AlternativePolicy& provided, const Ontology& o,
                                  int assertionTau) {
  AlternativePolicy r = required, p = provided;
  // dedup by (name, concept) before counting
  std::sort(r.assertions.begin(), r.assertions.end());
  r.assertions.erase(std::unique(r.assertions.begin(), r.assertions.end()), r.assertions.end());
  std::sort(p.assertions.begin(), p.assertions.end());
  p.assertions.erase(std::unique(p.assertions.begin(), p.assertions.end()), p.assertions.end());

  std::vector<bool> used(p.assertions.size(), false);
  double mean = best_injection(r.assertions, p.assertions, o, assertionTau, 0, used, 0.0);
  if (mean < 0.0) return PolicyScore::failed();
  double ratio = p.assertions.empty()
                     ? 1.0
                     : static_cast<double>(r.assertions.size()) / static_cast<double>(p.assertions.size());
  return PolicyScore::of(mean * ratio);
}

PolicyScore policy_satisfaction(const std::optional<Policy>& required,
                                const std::optional<Policy>& provided, const Ontology& o,
                                int assertionTau) {
  if (!required) return PolicyScore::not_evaluated();
  if (!provided) return PolicyScore::failed();
  PolicyScore best = PolicyScore::failed();
  for (const AlternativePolicy& ralt : required->alternatives) {
    for (const AlternativePolicy& palt : provided->alternatives) {
      PolicyScore s = alternative_satisfies(ralt, palt, o, assertionTau);
      if (s.verdict == PolicyVerdict::Scored &&
          (best.verdict != PolicyVerdict::Scored || s.score > best.score))
        best = s;
    }
  }
  return best;
}

}  // namespace bpws
