#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bpws/matcher.hpp"
#include "bpws/model.hpp"

namespace bpws {

/// Sentinel partner link carried by unbound invokes.
inline constexpr const char* kAbstractPartnerLink = "##abstract";

struct BpelInvoke {
  std::string name;
  std::string partnerLink;
  std::string operation;
  std::string interfaceName;
  std::string inputVariable;
  std::string outputVariable;
  bool abstract_ = false;

  bool operator==(const BpelInvoke&) const = default;
};

enum class BpelKind { Sequence, Flow, If, Invoke };

struct BpelNode {
  BpelKind kind = BpelKind::Sequence;
  BpelInvoke invoke;                 // BpelKind::Invoke
  std::vector<BpelNode> children;    // sequence / flow

  struct Branch {
    std::string condition;
    std::vector<BpelNode> body;  // exactly one node
    bool operator==(const Branch&) const = default;
  };
  std::vector<Branch> branches;   // if / elseif
  std::vector<BpelNode> elseBody;  // zero or one node

  bool operator==(const BpelNode&) const = default;
};

struct BpelImport {
  std::string ns;
  std::string location;
  bool operator==(const BpelImport&) const = default;
};

struct BpelPartnerLink {
  std::string name;
  std::string serviceId;
  std::string endpoint;
  bool operator==(const BpelPartnerLink&) const = default;
};

struct BpelVariable {
  std::string name;
  std::string typeName;
  bool operator==(const BpelVariable&) const = default;
};

struct BpelDocument {
  std::string processName;
  std::vector<BpelImport> imports;
  std::vector<BpelPartnerLink> partnerLinks;
  std::vector<BpelVariable> variables;
  BpelNode body;

  bool operator==(const BpelDocument&) const = default;
};

struct BoundService {
  std::string serviceId;
  std::string operationName;
  std::string interfaceName;
  std::string endpoint;
  std::string wsdlLocation;

  bool operator==(const BoundService&) const = default;
};

/// Abstract activity id -> chosen candidate.
struct BindingSelection {
  std::map<std::string, BoundService> entries;

  bool operator==(const BindingSelection&) const = default;
};

/// Maps a valid process node-for-node onto a BPEL-shaped control tree;
/// abstract activities become invokes with the `##abstract` sentinel.
BpelDocument emit_abstract_bpel(const ProcessDocument& doc);

/// Rewrites every abstract invoke with its selection; appends one partner
/// link and import per distinct service. Throws UnboundActivity,
/// UnknownActivity, AlreadyBound.
BpelDocument bind(const BpelDocument& b, const BindingSelection& sel);

/// Picks the rank-th candidate (1 = best) per abstract activity.
/// Throws NoCandidate naming any activity with fewer candidates.
BindingSelection select_top(const DiscoveryReport& report, int rank);

std::string serialize_bpel(const BpelDocument& doc);
BpelDocument parse_bpel(std::string_view bytes);

std::string serialize_binding(const BindingSelection& sel);
BindingSelection parse_binding(std::string_view bytes);

/// Node kinds in pre-order, for shape-preservation checks.
std::vector<BpelKind> control_shape(const BpelDocument& doc);

/// Abstract invoke names in document order.
std::vector<std::string> abstract_invokes(const BpelDocument& doc);

}  // namespace bpws
