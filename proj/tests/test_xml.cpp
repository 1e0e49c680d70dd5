#include <doctest.h>

#include "bpws/error.hpp"
#include "bpws/xml.hpp"

using namespace bpws;

TEST_CASE("xml parses attributes and nested elements") {
  auto root = xml::parse("<a x=\"1\"><b y=\"two\"/><c>text</c></a>");
  CHECK(root.name == "a");
  CHECK(*root.attr("x") == "1");
  REQUIRE(root.children.size() == 2);
  CHECK(*root.children[0].attr("y") == "two");
  CHECK(root.children[1].text == "text");
}

TEST_CASE("xml entity escapes round-trip") {
  xml::Element el{"a"};
  el.set("v", "x<y&\"z\"");
  el.text = "1 < 2 & 3 > 2";
  auto again = xml::parse(xml::serialize(el));
  CHECK(again == el);
}

TEST_CASE("xml serialization is stable under reparse") {
  std::string doc = "<root a=\"1\">\n  <child/>\n  <child k=\"v\">body</child>\n</root>\n";
  auto first = xml::serialize(xml::parse(doc));
  auto second = xml::serialize(xml::parse(first));
  CHECK(first == second);
}

TEST_CASE("xml rejects malformed input") {
  CHECK_THROWS_AS(xml::parse("<a><b></a>"), Error);
  CHECK_THROWS_AS(xml::parse("<a x=1/>"), Error);
  CHECK_THROWS_AS(xml::parse("<a/><b/>"), Error);
  CHECK_THROWS_AS(xml::parse("no markup"), Error);
}

TEST_CASE("xml skips declaration and comments") {
  auto root = xml::parse("<?xml version=\"1.0\"?>\n<!-- note -->\n<a><!-- inner --><b/></a>");
  CHECK(root.children.size() == 1);
}
