#include <doctest.h>

#include "netlift/error.hpp"
#include "netlift/schematic.hpp"
#include "test_util.hpp"

using namespace netlift;

namespace {

SchematicDoc resistor_doc() {
  ElementDetection r;
  r.id = "E1";
  r.etype = ElementType::Resistor;
  r.bbox = BBox(40, 40, 60, 80);
  NetGeometry a, b;
  a.label = 1;
  a.segments = {Segment({50, 40}, {50, 20}), Segment({50, 20}, {90, 20})};
  b.label = 2;
  b.segments = {Segment({50, 80}, {50, 100})};
  const std::vector<NetBinding> binds{{{"E1", "p", {50, 40}}, 1, 0}, {{"E1", "n", {50, 80}}, 2, 0}};
  const std::vector<ElementDetection> dets{r};
  const std::vector<NetGeometry> nets{a, b};
  return build_schematic({120, 120}, dets, nets, {{1, "VDD"}, {2, "0"}}, binds);
}

std::size_t occurrences(const std::string& s, const std::string& what) {
  std::size_t n = 0;
  for (auto p = s.find(what); p != std::string::npos; p = s.find(what, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("build_schematic copies counts") {
  const SchematicDoc d = resistor_doc();
  CHECK(d.elements.size() == 1);
  CHECK(d.nets.size() == 2);
  CHECK(d.bindings.size() == 2);
  CHECK(d.nets[0].name == "VDD");
  CHECK(d.bindings[1].net_name == "0");
}

TEST_CASE("empty inputs give an empty document") {
  const SchematicDoc d = build_schematic({10, 10}, {}, {}, {}, {});
  CHECK(d.elements.empty());
  CHECK(d.nets.empty());
  const std::string svg = render_svg(d);
  CHECK(occurrences(svg, "<svg") == 1);
  CHECK(occurrences(svg, "<g") == 0);
  CHECK(svg.ends_with("</svg>\n"));
}

TEST_CASE("net labels without names are rejected") {
  NetGeometry a;
  a.label = 3;
  const std::vector<NetGeometry> nets{a};
  CHECK_THROWS_AS(build_schematic({10, 10}, {}, nets, {}, {}), ValidationError);
}

TEST_CASE("svg has one label per net and is deterministic") {
  SchematicDoc d = resistor_doc();
  d.nets.erase(d.nets.begin() + 1);
  d.bindings.pop_back();
  const std::string svg = render_svg(d);
  CHECK(occurrences(svg, "<text") == 1);
  CHECK(occurrences(svg, ">VDD</text>") == 1);
  CHECK(render_svg(d) == svg);
  CHECK(occurrences(svg, "class=\"element\"") == 1);
}

TEST_CASE("schematic json round-trips") {
  const auto dir = testutil::temp_dir("schematic");
  testutil::Rng rng(61);
  for (int i = 0; i < 100; ++i) {
    const SchematicDoc d = testutil::random_schematic(rng);
    CHECK(parse_schematic(dump_schematic(d)) == d);
  }
  const SchematicDoc d = resistor_doc();
  save_schematic(d, dir / "s.json");
  CHECK(load_schematic(dir / "s.json") == d);
}

TEST_CASE("schema errors name the field") {
  try {
    parse_schematic(R"({"canvas":{"width":1,"height":1},"elements":[],"bindings":[]})");
    FAIL("expected schema error");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("nets") != std::string::npos);
  }
  try {
    parse_schematic(R"({"canvas":{"width":1,"height":1},"elements":[{"id":"a","etype":"resistor","bbox":[0,0,1,1],"rotation":33,"mirrored":false}],"nets":[],"bindings":[]})");
    FAIL("expected schema error");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("elements[0]") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_schematic(
                      R"({"canvas":{"width":1,"height":1},"elements":[{"id":"a","etype":"resistor","bbox":[0,0,1,1],"rotation":0,"mirrored":false}],"nets":[],"bindings":[{"element_id":"a","pin_name":"p","net_name":"zz"}]})"),
                  ValidationError);
}
