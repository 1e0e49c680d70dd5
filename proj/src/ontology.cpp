#include "bpws/ontology.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "bpws/error.hpp"

namespace bpws {

bool is_valid_iri(std::string_view iri) {
  if (iri.empty()) return false;
  for (char c : iri)
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') return false;
  return iri.find("://") != std::string_view::npos;
}

void Ontology::add_concept(const SemanticConcept& c) {
  if (index_.contains(c.iri)) return;
  index_.emplace(c.iri, nodes_.size());
  nodes_.push_back(c);
  adjacency_.emplace_back();
}

void Ontology::add_edge(const SemanticConcept& a, const SemanticConcept& b) {
  add_concept(a);
  add_concept(b);
  if (a.iri == b.iri) return;
  std::size_t ia = index_.at(a.iri);
  std::size_t ib = index_.at(b.iri);
  auto& na = adjacency_[ia];
  if (std::find(na.begin(), na.end(), ib) != na.end()) return;
  na.push_back(ib);
  adjacency_[ib].push_back(ia);
  ++edge_count_;
}

bool Ontology::contains(const SemanticConcept& c) const { return index_.contains(c.iri); }

Ontology load_ontology(std::string_view text) {
  Ontology o;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    size_t b = line.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    size_t e = line.find_last_not_of(" \t");
    std::string trimmed = line.substr(b, e - b + 1);
    if (trimmed[0] == '#') continue;
    std::string where = "line " + std::to_string(lineno);
    size_t sep = trimmed.find(" -- ");
    if (sep == std::string::npos)
      throw Error(ErrorKind::MalformedLine, where, "expected `<iri> -- <iri>`");
    std::string lhs = trimmed.substr(0, sep);
    std::string rhs = trimmed.substr(sep + 4);
    if (lhs.empty() || rhs.empty() || rhs.find(" -- ") != std::string::npos)
      throw Error(ErrorKind::MalformedLine, where, "expected exactly two identifiers");
    if (!is_valid_iri(lhs)) throw Error(ErrorKind::InvalidIri, where, lhs);
    if (!is_valid_iri(rhs)) throw Error(ErrorKind::InvalidIri, where, rhs);
    o.add_edge({lhs}, {rhs});
  }
  return o;
}

Distance edge_distance(const Ontology& o, const SemanticConcept& a, const SemanticConcept& b) {
  if (a.iri == b.iri) return Distance::of(0);
  auto ia = o.index_.find(a.iri);
  auto ib = o.index_.find(b.iri);
  if (ia == o.index_.end() || ib == o.index_.end()) return Distance::unreachable();
  std::vector<int> dist(o.nodes_.size(), -1);
  std::deque<std::size_t> queue;
  dist[ia->second] = 0;
  queue.push_back(ia->second);
  while (!queue.empty()) {
    std::size_t cur = queue.front();
    queue.pop_front();
    if (cur == ib->second) return Distance::of(dist[cur]);
    for (std::size_t next : o.adjacency_[cur]) {
      if (dist[next] < 0) {
        dist[next] = dist[cur] + 1;
        queue.push_back(next);
      }
    }
  }
  return Distance::unreachable();
}

double similarity(Distance d) {
  if (!d.reachable) return 0.0;
  return 1.0 / (1.0 + d.value);
}

ConceptMatch concept_match(const Ontology& o, const SemanticConcept& required,
                           const SemanticConcept& provided, int tau) {
  Distance d = edge_distance(o, required, provided);
  return {d.reachable && d.value <= tau, similarity(d)};
}

}  // namespace bpws
