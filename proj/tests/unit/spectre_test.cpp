#include <doctest.h>

#include "netlift/error.hpp"
#include "netlift/spectre.hpp"
#include "test_util.hpp"

using namespace netlift;

namespace {

Netlist one(const std::string& name, ElementType t, std::vector<std::string> pins) {
  Netlist n;
  n.components.push_back({name, t, std::move(pins)});
  canonicalize(n);
  return n;
}

}  // namespace

TEST_CASE("emit follows the instance grammar") {
  CHECK(emit_spectre(one("R1", ElementType::Resistor, {"VDD", "0"})) ==
        "// generated by netlift\nsimulator lang=spectre\nR1 (VDD 0) resistor\n");
  CHECK(emit_spectre(Netlist{}) == "// generated by netlift\nsimulator lang=spectre\n");
  CHECK(emit_spectre(one("M1", ElementType::NMOS, {"net1", "net2", "0", "0"})).ends_with("M1 (net1 net2 0 0) nmos\n"));
}

TEST_CASE("emit orders components naturally and canonicalizes ground") {
  Netlist n;
  n.components = {{"R10", ElementType::Resistor, {"a", "GND"}}, {"R2", ElementType::Resistor, {"a", "b"}}};
  canonicalize(n);
  CHECK(emit_spectre(n) == "// generated by netlift\nsimulator lang=spectre\nR2 (a b) resistor\nR10 (a 0) resistor\n");
}

TEST_CASE("emit rejects pin-count mismatches") {
  Netlist n;
  n.components = {{"M1", ElementType::NMOS, {"a", "b", "c"}}};
  canonicalize(n);
  CHECK_THROWS_AS(emit_spectre(n), ValidationError);
}

TEST_CASE("parse errors carry line numbers") {
  try {
    parse_spectre("R1 (a b) resistor\nR1 (b c) resistor\n");
    FAIL("expected duplicate error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  try {
    parse_spectre("// c\nM1 (a b c) nmos\n");
    FAIL("expected pin-count error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_spectre("Q1 (a b) transistor\n"), ParseError);
  CHECK_THROWS_AS(parse_spectre("R1 a b resistor\n"), ParseError);
  CHECK_THROWS_AS(parse_spectre("G1 (a) gnd\n"), ParseError);
}

TEST_CASE("parse tolerates comments, spacing and parameters") {
  const Netlist n = parse_spectre("\n// x\n  R1   ( VDD   n1 )  resistor r=1k\nC1 (n1 GND) capacitor c=1p\n");
  REQUIRE(n.components.size() == 2);
  CHECK(n.components[1].pins == std::vector<std::string>{"VDD", "n1"});
  CHECK(n.ground_names == std::set<std::string>{"GND"});
  CHECK(n.power_names == std::set<std::string>{"VDD"});
  CHECK(n.nets == std::set<std::string>{"GND", "VDD", "n1"});
}

TEST_CASE("parse of emit is the identity on random netlists") {
  testutil::Rng rng(51);
  for (int i = 0; i < 300; ++i) {
    const Netlist n = testutil::random_netlist(rng, 8, 0, 12);
    const std::string text = emit_spectre(n);
    CHECK(parse_spectre(text) == n);
    CHECK(emit_spectre(n) == text);
  }
}

TEST_CASE("save and load through files") {
  const auto dir = testutil::temp_dir("scs");
  const Netlist n = one("D1", ElementType::Diode, {"a", "0"});
  save_spectre(n, dir / "n.scs");
  CHECK(load_spectre(dir / "n.scs") == n);
  CHECK_THROWS_AS(load_spectre(dir / "missing.scs"), IoError);
}
