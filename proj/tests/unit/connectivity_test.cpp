#include <doctest.h>

#include <fstream>

#include "netlift/connectivity.hpp"
#include "netlift/error.hpp"
#include "test_util.hpp"

using namespace netlift;

namespace {

ElementDetection det(std::string id, ElementType t, BBox b, int rot = 0, bool mirrored = false) {
  ElementDetection d;
  d.id = std::move(id);
  d.etype = t;
  d.bbox = b;
  d.rotation = {angle_from_degrees(rot), mirrored};
  return d;
}

NetGeometry net(int label, std::vector<Segment> segs) {
  NetGeometry n;
  n.label = label;
  n.segments = std::move(segs);
  return n;
}

NetBinding bind(const std::string& id, const std::string& pin, int label) { return {{id, pin, {0, 0}}, label, 0.0}; }

}  // namespace

TEST_CASE("resistor pins sit at the end midpoints") {
  const auto pins = pin_positions(det("R", ElementType::Resistor, BBox(0, 0, 20, 60)));
  REQUIRE(pins.size() == 2);
  CHECK(pins[0].pin_name == "p");
  CHECK(pins[0].at == Point{10, 0});
  CHECK(pins[1].at == Point{10, 60});
}

TEST_CASE("rotated resistor pins land on the rotated box's end midpoints") {
  // The box is given as drawn; a quarter-turned resistor is wide.
  const auto pins = pin_positions(det("R", ElementType::Resistor, BBox(0, 0, 20, 60), 90));
  REQUIRE(pins.size() == 2);
  // oracle: rotate the unrotated anchors about the box centre (10, 30)
  CHECK(pins[0].at == Point{20, 30});
  CHECK(pins[1].at == Point{0, 30});
  const auto wide = pin_positions(det("R", ElementType::Resistor, BBox(0, 0, 60, 20), 90));
  CHECK(wide[0].at == Point{60, 10});
  CHECK(wide[1].at == Point{0, 10});
}

TEST_CASE("one-terminal symbols have a top-centre pin") {
  const auto pins = pin_positions(det("G", ElementType::Gnd, BBox(40, 40, 60, 60)));
  REQUIRE(pins.size() == 1);
  CHECK(pins[0].at == Point{50, 40});
}

TEST_CASE("pin positions are rotation equivariant") {
  testutil::Rng rng(41);
  for (ElementType t : kAllElementTypes) {
    for (int trial = 0; trial < 10; ++trial) {
      const int w = 2 * rng.uniform(5, 30), h = 2 * rng.uniform(5, 30);
      const int x0 = rng.uniform(0, 50), y0 = rng.uniform(0, 50);
      const bool mir = rng.uniform(0, 1);
      const int q = rng.uniform(0, 3);
      // Box of the element after q turns, and after one more.
      const Size s0 = rotated_size({w, h}, angle_from_degrees(90 * q));
      const Size s1 = rotated_size({w, h}, angle_from_degrees(90 * ((q + 1) % 4)));
      const double cx = x0 + s0.width / 2.0, cy = y0 + s0.height / 2.0;
      const BBox b0(x0, y0, x0 + s0.width, y0 + s0.height);
      const BBox b1(static_cast<int>(cx - s1.width / 2.0), static_cast<int>(cy - s1.height / 2.0),
                    static_cast<int>(cx + s1.width / 2.0), static_cast<int>(cy + s1.height / 2.0));
      const auto p0 = pin_positions(det("E", t, b0, 90 * q, mir));
      const auto p1 = pin_positions(det("E", t, b1, 90 * ((q + 1) % 4), mir));
      REQUIRE(p0.size() == p1.size());
      for (std::size_t i = 0; i < p0.size(); ++i) {
        // one extra clockwise quarter turn about the centre: (dx,dy) -> (-dy,dx)
        const double dx = p0[i].at.x - cx, dy = p0[i].at.y - cy;
        CHECK(std::abs(p1[i].at.x - (cx - dy)) <= 1);
        CHECK(std::abs(p1[i].at.y - (cy + dx)) <= 1);
      }
    }
  }
}

TEST_CASE("mirroring swaps MOS drain/source side") {
  const auto plain = pin_positions(det("M", ElementType::NMOS, BBox(0, 0, 40, 40)));
  const auto mir = pin_positions(det("M", ElementType::NMOS, BBox(0, 0, 40, 40), 0, true));
  CHECK(plain[0].at == Point{40, 10});
  CHECK(plain[1].at == Point{0, 20});
  CHECK(mir[0].at == Point{0, 10});
  CHECK(mir[1].at == Point{40, 20});
}

TEST_CASE("assign_nets snaps within the radius") {
  const std::vector<NetGeometry> nets{net(1, {Segment({10, 0}, {10, 30})})};
  const std::vector<PinInstance> at{{"R", "p", {10, 0}}};
  auto b = assign_nets(at, nets, 6);
  REQUIRE(b.bound.size() == 1);
  CHECK(b.bound[0].distance == 0.0);

  const std::vector<PinInstance> near{{"R", "p", {15, 0}}};
  CHECK(assign_nets(near, nets, 6).bound.size() == 1);
  const std::vector<PinInstance> far{{"R", "p", {19, 0}}};
  b = assign_nets(far, nets, 6);
  CHECK(b.bound.empty());
  CHECK(b.unbound.size() == 1);
}

TEST_CASE("assign_nets breaks ties toward the lower label") {
  const std::vector<NetGeometry> nets{net(5, {Segment({0, 3}, {20, 3})}), net(2, {Segment({0, -3}, {20, -3})})};
  const std::vector<PinInstance> pin{{"R", "p", {10, 0}}};
  CHECK(assign_nets(pin, nets, 6).bound.at(0).net_label == 2);
}

TEST_CASE("binding distance equals brute-force sampling within snap") {
  testutil::Rng rng(43);
  for (int i = 0; i < 100; ++i) {
    std::vector<NetGeometry> nets;
    for (int k = 0; k < 3; ++k) {
      const Point a{rng.uniform(0, 40), rng.uniform(0, 40)};
      Point b{rng.uniform(0, 40), rng.uniform(0, 40)};
      if (a == b) b.x += 1;
      nets.push_back(net(k + 1, {Segment(a, b)}));
    }
    const std::vector<PinInstance> pin{{"E", "p", {rng.uniform(0, 40), rng.uniform(0, 40)}}};
    const auto r = assign_nets(pin, nets, 8);
    double best = 1e9;
    for (const auto& n : nets) {
      const auto& s = n.segments[0];
      for (int t = 0; t <= 2000; ++t) {
        const double x = s.a().x + (s.b().x - s.a().x) * t / 2000.0, y = s.a().y + (s.b().y - s.a().y) * t / 2000.0;
        best = std::min(best, std::hypot(x - pin[0].at.x, y - pin[0].at.y));
      }
    }
    if (!r.bound.empty()) {
      CHECK(r.bound[0].distance <= 8.0);
      CHECK(r.bound[0].distance == doctest::Approx(best).epsilon(0.01));
    } else {
      CHECK(best > 8.0 - 0.05);
    }
  }
}

TEST_CASE("assemble names power, ground and numbered nets") {
  const std::vector<ElementDetection> dets{det("R9", ElementType::Resistor, BBox(0, 0, 20, 40)),
                                           det("V", ElementType::Vdd, BBox(100, 0, 120, 20)),
                                           det("G", ElementType::Gnd, BBox(100, 100, 120, 120))};
  const std::vector<NetBinding> b{bind("R9", "p", 1), bind("R9", "n", 2), bind("V", "t", 1), bind("G", "t", 2)};
  const Assembly a = assemble_netlist(dets, b);
  REQUIRE(a.netlist.components.size() == 1);
  CHECK(a.netlist.components[0].name == "R1");
  CHECK(a.netlist.components[0].pins == std::vector<std::string>{"VDD", "0"});
  CHECK(a.netlist.nets == std::set<std::string>{"VDD", "0"});
  CHECK(a.warnings.empty());
}

TEST_CASE("assemble of nothing is empty") {
  const Assembly a = assemble_netlist({}, {});
  CHECK(a.netlist.components.empty());
  CHECK(a.netlist.nets.empty());
}

TEST_CASE("remaining nets are numbered by ascending label") {
  const std::vector<ElementDetection> dets{det("Q", ElementType::NMOS, BBox(0, 0, 40, 40))};
  const std::vector<NetBinding> b{bind("Q", "d", 3), bind("Q", "g", 4), bind("Q", "s", 5), bind("Q", "b", 5)};
  const Assembly a = assemble_netlist(dets, b);
  CHECK(a.netlist.components.at(0).name == "M1");
  CHECK(a.netlist.components.at(0).pins == std::vector<std::string>{"net1", "net2", "net3", "net3"});
}

TEST_CASE("every ground label collapses into net 0") {
  const std::vector<ElementDetection> dets{det("C", ElementType::Capacitor, BBox(0, 0, 20, 40)),
                                           det("G1", ElementType::Gnd, BBox(100, 0, 120, 20)),
                                           det("G2", ElementType::Gnd, BBox(200, 0, 220, 20))};
  const std::vector<NetBinding> b{bind("C", "p", 1), bind("C", "n", 2), bind("G1", "t", 1), bind("G2", "t", 2)};
  const Assembly a = assemble_netlist(dets, b);
  CHECK(a.netlist.components[0].pins == std::vector<std::string>{"0", "0"});
  CHECK(a.netlist.nets == std::set<std::string>{"0"});
}

TEST_CASE("second Vdd and ports name their nets") {
  const std::vector<ElementDetection> dets{
      det("X", ElementType::OpAmp, BBox(0, 0, 40, 40)), det("V1", ElementType::Vdd, BBox(100, 0, 120, 20)),
      det("V2", ElementType::Vdd, BBox(200, 0, 220, 20)), det("VOUT", ElementType::Port, BBox(300, 0, 320, 20))};
  const std::vector<NetBinding> b{bind("X", "inp", 1), bind("X", "inn", 2), bind("X", "out", 3),
                                  bind("V1", "t", 1), bind("V2", "t", 2), bind("VOUT", "t", 3)};
  const Assembly a = assemble_netlist(dets, b);
  CHECK(a.netlist.components[0].name == "X1");
  CHECK(a.netlist.components[0].pins == std::vector<std::string>{"VDD", "VDD2", "VOUT"});
}

TEST_CASE("unbound component pins are errors, bulk defaults are not") {
  const std::vector<ElementDetection> dets{det("P", ElementType::PMOS, BBox(0, 0, 40, 40)),
                                           det("R", ElementType::Resistor, BBox(100, 0, 120, 40))};
  const std::vector<NetBinding> b{bind("P", "d", 1), bind("P", "g", 2), bind("P", "s", 3), bind("R", "p", 1),
                                  bind("R", "n", 3)};
  const Assembly a = assemble_netlist(dets, b);
  CHECK(a.netlist.components[0].pins.back() == "VDD");

  const std::vector<NetBinding> missing{bind("P", "d", 1), bind("P", "g", 2), bind("P", "s", 3), bind("R", "p", 1)};
  try {
    assemble_netlist(dets, missing);
    FAIL("expected an error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("R") != std::string::npos);
    CHECK(std::string(e.what()).find("pin n") != std::string::npos);
  }
}

TEST_CASE("unattached symbols produce a warning") {
  const std::vector<ElementDetection> dets{det("G", ElementType::Gnd, BBox(0, 0, 20, 20))};
  const Assembly a = assemble_netlist(dets, {});
  CHECK(a.warnings.size() == 1);
}

TEST_CASE("assembly is deterministic") {
  const std::vector<ElementDetection> dets{det("A", ElementType::Resistor, BBox(0, 0, 20, 40)),
                                           det("B", ElementType::Capacitor, BBox(100, 0, 120, 40))};
  const std::vector<NetBinding> b{bind("A", "p", 7), bind("A", "n", 2), bind("B", "p", 2), bind("B", "n", 9)};
  const Assembly x = assemble_netlist(dets, b), y = assemble_netlist(dets, b);
  CHECK(x.netlist == y.netlist);
  CHECK(x.net_names == y.net_names);
}

TEST_CASE("detections documents round-trip and reject bad input") {
  DetectionsDoc d;
  d.image = "image.pgm";
  d.width = 100;
  d.height = 80;
  d.elements = {det("E1", ElementType::NMOS, BBox(1, 2, 41, 42), 270, true)};
  d.crosspoints = {{{5, 6}, CrossKind::Crossing}, {{7, 8}, CrossKind::Junction}};
  CHECK(parse_detections(dump_detections(d)) == d);

  CHECK_THROWS_AS(parse_detections(R"({"width":10,"height":10,"elements":[{"id":"a","type":"widget","bbox":[0,0,1,1]}]})"),
                  FormatError);
  CHECK_THROWS_AS(parse_detections(R"({"width":10,"height":10,"elements":[{"id":"a","type":"resistor","bbox":[0,0,20,1]}]})"),
                  FormatError);
  CHECK_THROWS_AS(parse_detections(R"({"width":10,"height":10,"elements":[{"id":"a","type":"resistor","bbox":[0,0,1,1],"rotation":45}]})"),
                  FormatError);
  CHECK_THROWS_AS(parse_detections(R"({"width":10,"height":10,"elements":[
    {"id":"a","type":"resistor","bbox":[0,0,1,1]},{"id":"a","type":"resistor","bbox":[0,0,1,1]}]})"),
                  FormatError);
}

TEST_CASE("pin table overrides replace built-in anchors") {
  const auto dir = testutil::temp_dir("pins");
  {
    std::ofstream out(dir / "pins.json");
    out << R"({"resistor":[{"name":"a","u":0,"v":0.5},{"name":"b","u":1,"v":0.5}]})";
  }
  const PinTable t = PinTable::load_override(dir / "pins.json");
  CHECK(t.spec(ElementType::Resistor).pins[0].name == "a");
  CHECK(t.spec(ElementType::NMOS).pins.size() == 4);
  const auto pins = pin_positions(det("R", ElementType::Resistor, BBox(0, 0, 40, 20)), t);
  CHECK(pins[0].at == Point{0, 10});
  {
    std::ofstream out(dir / "bad.json");
    out << R"({"resistor":[{"name":"a","u":0,"v":0.5}]})";
  }
  CHECK_THROWS_AS(PinTable::load_override(dir / "bad.json"), FormatError);
}
