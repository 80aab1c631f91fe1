#include <doctest.h>

#include <nlohmann/json.hpp>

#include "netlift/evaluate.hpp"
#include "netlift/spectre.hpp"
#include "test_util.hpp"

using namespace netlift;

namespace {

// Mutate one pin or the type of one component.
Netlist perturb(const Netlist& n, testutil::Rng& rng) {
  Netlist out = n;
  if (out.components.empty()) return out;
  auto& c = out.components[rng.uniform(0, static_cast<int>(out.components.size()) - 1)];
  c.pins[rng.uniform(0, static_cast<int>(c.pins.size()) - 1)] = "fresh";
  canonicalize(out);
  return out;
}

}  // namespace

TEST_CASE("f1 from counts") {
  const Scores s = f1_from_counts(9, 1, 2);
  CHECK(s.precision == doctest::Approx(0.9));
  CHECK(s.recall == doctest::Approx(9.0 / 11.0));
  CHECK(s.f1 == doctest::Approx(0.8571).epsilon(1e-4));
  CHECK(f1_from_counts(0, 0, 0).f1 == 1.0);
  CHECK(f1_from_counts(0, 5, 3).f1 == 0.0);
}

TEST_CASE("confusion counts unmatched and mistyped items") {
  const Netlist gt = parse_spectre("R1 (a b) resistor\nC1 (b 0) capacitor\n");
  const Netlist pred = parse_spectre("R1 (a b) resistor\n");
  const Confusion c = count_confusion(gt, pred, {{"a", "a"}, {"b", "b"}, {"0", "0"}}, {{"R1", "R1"}});
  CHECK(c == Confusion{3, 0, 3});

  const Netlist wrong = parse_spectre("L1 (a b) inductor\n");
  const Confusion t = count_confusion(parse_spectre("R1 (a b) resistor\n"), wrong, {{"a", "a"}, {"b", "b"}}, {{"R1", "L1"}});
  CHECK(t == Confusion{2, 1, 1});
}

TEST_CASE("net renaming is invisible to the score") {
  const Netlist gt = parse_spectre("R1 (VDD out) resistor\nM1 (out in 0 0) nmos\n");
  const Netlist pred = parse_spectre("R1 (VDD net7) resistor\nM1 (net7 net2 0 0) nmos\n");
  const EvalReport r = best_permutation_score(gt, pred);
  CHECK(r.f1 == 1.0);
  CHECK(r.exact);
  CHECK(r.net_mapping.at("out") == "net7");
}

TEST_CASE("two empty netlists agree perfectly") {
  const EvalReport r = best_permutation_score(Netlist{}, Netlist{});
  CHECK(r.f1 == 1.0);
  CHECK(r.tp == 0);
}

TEST_CASE("best permutation equals the brute-force optimum") {
  testutil::Rng rng(71);
  for (int i = 0; i < 300; ++i) {
    const Netlist g = testutil::random_netlist(rng, 5, 0, 4);
    const Netlist p = rng.uniform(0, 1) ? perturb(testutil::rename_nets(g, rng), rng) : testutil::random_netlist(rng, 5, 0, 4);
    const EvalReport r = best_permutation_score(g, p);
    REQUIRE(r.exact);
    const long tp = testutil::brute_force_tp(g, p);
    CHECK(r.tp == tp);
    CHECK(r.tp + r.fn == testutil::item_count(g));
    CHECK(r.tp + r.fp == testutil::item_count(p));
    CHECK(r.f1 == doctest::Approx(testutil::f1_of(tp, testutil::item_count(g), testutil::item_count(p))));
  }
}

TEST_CASE("score is symmetric in f1 and perfect on itself") {
  testutil::Rng rng(73);
  for (int i = 0; i < 200; ++i) {
    const Netlist a = testutil::random_netlist(rng, 8, 0, 10);
    const Netlist b = rng.uniform(0, 1) ? perturb(a, rng) : testutil::random_netlist(rng, 8, 0, 10);
    const EvalReport ab = best_permutation_score(a, b), ba = best_permutation_score(b, a);
    if (ab.exact && ba.exact) {
      CHECK(ab.f1 == doctest::Approx(ba.f1));
      CHECK(ab.tp == ba.tp);
    }
    const EvalReport self = best_permutation_score(a, a);
    CHECK(self.f1 == 1.0);
    CHECK(best_permutation_score(a, testutil::rename_nets(a, rng)).f1 == 1.0);
  }
}

TEST_CASE("adding a wrong component never raises the score") {
  testutil::Rng rng(79);
  for (int i = 0; i < 100; ++i) {
    const Netlist g = testutil::random_netlist(rng, 5, 1, 5);
    const Netlist p = perturb(g, rng);
    Netlist worse = p;
    worse.components.push_back({"R99", ElementType::Resistor, {"junk1", "junk2"}});
    canonicalize(worse);
    const EvalReport a = best_permutation_score(g, p), b = best_permutation_score(g, worse);
    CHECK(b.f1 <= a.f1 + 1e-12);
  }
}

TEST_CASE("reports serialize every field") {
  const Netlist gt = parse_spectre("R1 (a b) resistor\n");
  const EvalReport r = best_permutation_score(gt, gt);
  const auto j = nlohmann::json::parse(report_json(r));
  CHECK(j.at("f1").get<double>() == 1.0);
  CHECK(j.at("tp").get<long>() == 3);
  CHECK(j.contains("net_mapping"));
  CHECK(report_text(r).find("f1") != std::string::npos);
}
