#pragma once

#include <cstddef>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bpws/concept.hpp"

namespace bpws {

/// Edge count on the shortest path between two concepts, or Unreachable.
struct Distance {
  bool reachable = false;
  int value = 0;

  static Distance unreachable() { return {}; }
  static Distance of(int v) { return {true, v}; }

  bool operator==(const Distance&) const = default;
};

/// Undirected, unlabeled concept graph.
class Ontology {
public:
  Ontology() = default;

  /// Adds missing endpoints as nodes; ignores self-edges and duplicates.
  void add_edge(const SemanticConcept& a, const SemanticConcept& b);
  void add_concept(const SemanticConcept& c);

  bool contains(const SemanticConcept& c) const;
  std::size_t concept_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  const std::vector<SemanticConcept>& concepts() const { return nodes_; }

private:
  std::vector<SemanticConcept> nodes_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::size_t edge_count_ = 0;

  friend Distance edge_distance(const Ontology&, const SemanticConcept&, const SemanticConcept&);
};

/// Line-oriented edge list: `<iri> -- <iri>` per non-empty, non-# line.
Ontology load_ontology(std::string_view text);

/// 0 for identical iris (even off-graph); Unreachable when either endpoint is
/// absent or no path exists; otherwise unweighted shortest-path length.
Distance edge_distance(const Ontology& o, const SemanticConcept& a, const SemanticConcept& b);

/// 1/(1+d) for finite d, 0 for Unreachable.
double similarity(Distance d);

struct ConceptMatch {
  bool matched = false;
  double similarity = 0.0;
};

/// matched iff edge_distance <= tau.
ConceptMatch concept_match(const Ontology& o, const SemanticConcept& required,
                           const SemanticConcept& provided, int tau);

}  // namespace bpws
