#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bpws/concept.hpp"
#include "bpws/error.hpp"
#include "bpws/policy.hpp"

namespace bpws {

enum class PrimitiveKind { String, Decimal, Integer, Boolean, Date };

std::optional<PrimitiveKind> primitive_from_name(std::string_view name);
const char* primitive_name(PrimitiveKind k);

struct FieldDef {
  std::string name;
  std::string typeName;

  bool operator==(const FieldDef&) const = default;
};

struct DataType {
  std::string name;
  bool isRecord = false;
  PrimitiveKind primitive = PrimitiveKind::String;  // when !isRecord
  std::vector<FieldDef> fields;                     // when isRecord

  bool operator==(const DataType&) const = default;
};

/// Named types in definition order; primitive names resolve implicitly.
using TypeTable = std::vector<DataType>;

const DataType* find_type(const TypeTable& table, std::string_view name);

/// Resolves a type name against a table, synthesizing built-in primitives.
std::optional<DataType> resolve_type(const TypeTable& table, std::string_view name);

enum class Direction { Input, Output };

struct Parameter {
  std::string name;
  Direction direction = Direction::Input;
  std::string typeName;
  std::optional<SemanticConcept> annotation;

  bool operator==(const Parameter&) const = default;
};

enum class TriggerKind { Start, Interrupt, Terminate };

struct Event {
  std::string name;
  TriggerKind trigger = TriggerKind::Start;

  bool operator==(const Event&) const = default;
};

struct Resource {
  std::string name;
  std::string description;

  bool operator==(const Resource&) const = default;
};

enum class BehaviorKind { Invoke, Sequence, Parallel, Exclusive };

struct BehaviorNode {
  BehaviorKind kind = BehaviorKind::Invoke;
  std::string activityId;               // invoke
  std::vector<BehaviorNode> children;   // sequence / parallel

  struct Branch {
    std::string condition;
    std::vector<BehaviorNode> body;  // exactly one node
    bool operator==(const Branch&) const = default;
  };
  std::vector<Branch> branches;        // exclusive
  std::vector<BehaviorNode> elseBody;  // exclusive; zero or one node

  bool operator==(const BehaviorNode&) const = default;
};

enum class ActivityKind { Task, Subprocess };
enum class Binding { Internal, External, Abstract };

struct Activity {
  std::string id;
  ActivityKind kind = ActivityKind::Task;
  Binding binding = Binding::Internal;
  std::string role;  // optional; must name a declared role when present
  std::optional<SemanticConcept> domainConcept;
  std::optional<SemanticConcept> functionalityConcept;
  std::vector<Parameter> inputs;
  std::vector<Parameter> outputs;
  std::vector<Resource> resources;
  std::vector<Event> events;
  std::optional<Policy> policy;
  std::vector<Activity> children;             // subprocess only
  std::vector<BehaviorNode> childBehavior;    // subprocess only; zero or one

  bool operator==(const Activity&) const = default;
};

enum class ProcessKind { Macro, Elementary, Micro };

struct ProcessDocument {
  std::string id;
  std::string name;
  ProcessKind kind = ProcessKind::Micro;
  std::string goal;
  std::vector<std::string> roles;
  TypeTable types;
  std::vector<Activity> activities;
  BehaviorNode behavior;
  std::vector<ProcessDocument> childProcesses;

  bool operator==(const ProcessDocument&) const = default;
};

struct Violation {
  ErrorKind kind = ErrorKind::InvariantViolation;
  std::string path;
  std::string message;

  auto operator<=>(const Violation&) const = default;
};

/// Parses and fully validates; throws MalformedDocument / UnresolvedReference /
/// InvariantViolation with a location path.
ProcessDocument parse_process(std::string_view bytes);

/// Structural parse only; invariants are left to validate_process. Still
/// throws MalformedDocument on syntax problems.
ProcessDocument parse_process_unchecked(std::string_view bytes);

std::string serialize_process(const ProcessDocument& doc);

/// Every invariant violation, ordered by location path. Empty means valid.
std::vector<Violation> validate_process(const ProcessDocument& doc);

/// All binding=abstract activities in depth-first document order, including
/// subprocess children and nested child processes.
std::vector<const Activity*> abstract_activities(const ProcessDocument& doc);

}  // namespace bpws
