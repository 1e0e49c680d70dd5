#include <doctest.h>

#include "bpws/model.hpp"
#include "fixture_util.hpp"

using namespace bpws;

TEST_CASE("silver fixture parses with two abstract activities") {
  ProcessDocument doc = parse_process(read_fixture("silver.process.xml"));
  CHECK(doc.id == "silver-sale");
  CHECK(doc.kind == ProcessKind::Elementary);
  CHECK(doc.roles.size() == 3);
  CHECK(doc.activities.size() == 8);
  auto abstracts = abstract_activities(doc);
  REQUIRE(abstracts.size() == 2);
  CHECK(abstracts[0]->id == "GetRealTimeSilverPrice");
  CHECK(abstracts[1]->id == "CurrenciesExchange");
}

TEST_CASE("minimal document parses") {
  ProcessDocument doc = parse_process(read_fixture("minimal.process.xml"));
  CHECK(doc.activities.size() == 1);
  CHECK(abstract_activities(doc).empty());
}

TEST_CASE("invoke of missing id is an unresolved reference") {
  try {
    parse_process(read_fixture("invalid/missing_invoke.process.xml"));
    FAIL("expected UnresolvedReference");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnresolvedReference);
    CHECK(e.location().find("behavior") != std::string::npos);
  }
}

TEST_CASE("valid fixture has no violations") {
  ProcessDocument doc = parse_process(read_fixture("silver.process.xml"));
  CHECK(validate_process(doc).empty());
}

TEST_CASE("task with children yields exactly one violation") {
  ProcessDocument doc = parse_process_unchecked(read_fixture("invalid/task_with_children.process.xml"));
  auto violations = validate_process(doc);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].message.find("task") != std::string::npos);
}

TEST_CASE("abstract activity missing functionality yields one violation") {
  ProcessDocument doc = parse_process(read_fixture("minimal.process.xml"));
  doc.activities[0].binding = Binding::Abstract;
  doc.activities[0].domainConcept = SemanticConcept{"http://onto.example/x#A"};
  auto violations = validate_process(doc);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].message.find("functionality") != std::string::npos);
}

TEST_CASE("micro process with two roles is invalid") {
  ProcessDocument doc = parse_process(read_fixture("minimal.process.xml"));
  doc.roles.push_back("Second");
  auto violations = validate_process(doc);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].message.find("role") != std::string::npos);
}

TEST_CASE("abstract subprocess is rejected") {
  ProcessDocument doc = parse_process(read_fixture("minimal.process.xml"));
  Activity sub;
  sub.id = "Composite";
  sub.kind = ActivityKind::Subprocess;
  sub.binding = Binding::Abstract;
  sub.domainConcept = SemanticConcept{"http://onto.example/x#A"};
  sub.functionalityConcept = SemanticConcept{"http://onto.example/x#B"};
  Activity child;
  child.id = "Leaf";
  child.kind = ActivityKind::Task;
  child.binding = Binding::Internal;
  sub.children.push_back(child);
  doc.activities.push_back(sub);
  auto violations = validate_process(doc);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].message.find("abstract subprocess") != std::string::npos);
}

TEST_CASE("duplicate invoke of one activity is invalid") {
  ProcessDocument doc = parse_process(read_fixture("minimal.process.xml"));
  BehaviorNode seq;
  seq.kind = BehaviorKind::Sequence;
  BehaviorNode inv;
  inv.kind = BehaviorKind::Invoke;
  inv.activityId = "DoWork";
  seq.children = {inv, inv};
  doc.behavior = seq;
  auto violations = validate_process(doc);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].message.find("more than once") != std::string::npos);
}

TEST_CASE("abstract activity nested inside a subprocess is found") {
  ProcessDocument doc = parse_process(read_fixture("minimal.process.xml"));
  Activity sub;
  sub.id = "Wrapper";
  sub.kind = ActivityKind::Subprocess;
  sub.binding = Binding::Internal;
  Activity inner;
  inner.id = "HiddenAbstract";
  inner.kind = ActivityKind::Task;
  inner.binding = Binding::Abstract;
  inner.domainConcept = SemanticConcept{"http://onto.example/x#A"};
  inner.functionalityConcept = SemanticConcept{"http://onto.example/x#B"};
  sub.children.push_back(inner);
  doc.activities.push_back(sub);
  auto abstracts = abstract_activities(doc);
  REQUIRE(abstracts.size() == 1);
  CHECK(abstracts[0]->id == "HiddenAbstract");
}

TEST_CASE("process round-trips through serialization") {
  for (const char* file : {"silver.process.xml", "minimal.process.xml"}) {
    ProcessDocument doc = parse_process(read_fixture(file));
    std::string once = serialize_process(doc);
    ProcessDocument again = parse_process(once);
    CHECK(again == doc);
    CHECK(serialize_process(again) == once);
  }
}

TEST_CASE("violations are ordered by location path") {
  ProcessDocument doc = parse_process_unchecked(read_fixture("invalid/task_with_children.process.xml"));
  doc.goal.clear();
  auto violations = validate_process(doc);
  REQUIRE(violations.size() == 2);
  CHECK(violations[0].path <= violations[1].path);
}
