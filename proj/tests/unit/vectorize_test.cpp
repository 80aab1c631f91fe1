#include <doctest.h>

#include <set>

#include "netlift/net_extraction.hpp"
#include "netlift/vectorize.hpp"
#include "test_util.hpp"

using namespace netlift;

namespace {

bool is_thin(const BitMask& s) {
  for (int y = 0; y < s.height(); ++y) {
    for (int x = 0; x < s.width(); ++x) {
      if (s.get(x, y) && s.at(x + 1, y) && s.at(x - 1, y) && s.at(x, y + 1) && s.at(x, y - 1)) return false;
    }
  }
  return true;
}

bool subset(const BitMask& a, const BitMask& b) {
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    if (a.data()[i] && !b.data()[i]) return false;
  }
  return true;
}

BitMask line(int w, int h, std::vector<Point> pts) {
  BitMask m(w, h);
  for (auto p : pts) m.set(p.x, p.y);
  return m;
}

int count(const SkeletonGraph& g, NodeKind k) {
  return static_cast<int>(std::count_if(g.nodes.begin(), g.nodes.end(), [&](const SkeletonNode& n) { return n.kind == k; }));
}

}  // namespace

TEST_CASE("skeletonize trivial masks") {
  CHECK(skeletonize(BitMask(5, 5)).count() == 0);
  BitMask one(5, 5);
  one.set(2, 2);
  CHECK(skeletonize(one) == one);
}

TEST_CASE("3x10 bar thins to one run inside the middle row") {
  BitMask bar(10, 3, true);
  const BitMask s = skeletonize(bar);
  // Zhang-Suen also erodes the bar ends, so the run is shorter than 10.
  int first = -1, last = -1;
  for (int x = 0; x < 10; ++x) {
    CHECK_FALSE(s.get(x, 0));
    CHECK_FALSE(s.get(x, 2));
    if (s.get(x, 1)) {
      if (first < 0) first = x;
      last = x;
    }
  }
  REQUIRE(first >= 0);
  for (int x = first; x <= last; ++x) CHECK(s.get(x, 1));
  CHECK(last - first + 1 >= 6);
}

TEST_CASE("skeleton invariants on random stroke unions") {
  testutil::Rng rng(31);
  for (int i = 0; i < 100; ++i) {
    const BitMask m = testutil::random_stroke_mask(rng);
    const BitMask s = skeletonize(m, Exec::Serial);
    CHECK(subset(s, m));
    CHECK(is_thin(s));
    CHECK(testutil::component_count(s) == testutil::component_count(m));
  }
}

TEST_CASE("skeleton covers its stroke") {
  testutil::Rng rng(32);
  for (int i = 0; i < 40; ++i) {
    const int w = rng.uniform(1, 6);
    BitMask m(80, 40);
    const int y0 = rng.uniform(10, 30 - w);
    for (int y = y0; y < y0 + w; ++y) {
      for (int x = 5; x < 75; ++x) m.set(x, y);
    }
    const BitMask s = skeletonize(m);
    const double limit = w / 2.0 + 1;
    // Bar ends are eroded by thinning; coverage is checked away from them.
    for (int y = 0; y < 40; ++y) {
      for (int x = 5 + w; x < 75 - w; ++x) {
        if (!m.get(x, y)) continue;
        double best = 1e9;
        for (int yy = 0; yy < 40; ++yy) {
          for (int xx = 0; xx < 80; ++xx) {
            if (s.get(xx, yy)) best = std::min(best, std::hypot(xx - x, yy - y));
          }
        }
        CHECK(best <= limit);
      }
    }
  }
}

TEST_CASE("serial and parallel thinning agree") {
  testutil::Rng rng(33);
  for (int i = 0; i < 20; ++i) {
    const BitMask m = testutil::random_stroke_mask(rng, 200, 120);
    CHECK(skeletonize(m, Exec::Serial) == skeletonize(m, Exec::Parallel));
  }
}

TEST_CASE("skeleton degree matches a brute-force neighbour count") {
  testutil::Rng rng(34);
  for (int i = 0; i < 20; ++i) {
    const BitMask s = skeletonize(testutil::random_stroke_mask(rng));
    for (int y = 0; y < s.height(); ++y) {
      for (int x = 0; x < s.width(); ++x) {
        if (!s.get(x, y)) continue;
        int n = 0;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) n += (dx || dy) && s.at(x + dx, y + dy);
        }
        CHECK(skeleton_degree(s, x, y) == n);
      }
    }
  }
}

TEST_CASE("graph of a straight line") {
  std::vector<Point> pts;
  for (int x = 0; x < 10; ++x) pts.push_back({x, 2});
  const auto g = build_skeleton_graph(line(12, 5, pts));
  CHECK(count(g, NodeKind::End) == 2);
  CHECK(count(g, NodeKind::Turn) == 0);
  CHECK(g.edges.size() == 1);
  const auto segs = fit_segments(g);
  REQUIRE(segs.size() == 1);
  const std::set<Point> ends{segs[0].a(), segs[0].b()};
  CHECK(ends == std::set<Point>{{0, 2}, {9, 2}});
}

TEST_CASE("graph of an L has a turn at the corner") {
  std::vector<Point> pts;
  for (int x = 0; x <= 8; ++x) pts.push_back({x, 0});
  for (int y = 1; y <= 9; ++y) pts.push_back({8, y});
  const auto g = build_skeleton_graph(line(12, 12, pts));
  CHECK(count(g, NodeKind::End) == 2);
  REQUIRE(count(g, NodeKind::Turn) == 1);
  for (const auto& n : g.nodes) {
    if (n.kind == NodeKind::Turn) CHECK(n.at == Point{8, 0});
  }
  CHECK(fit_segments(g).size() == 2);
}

TEST_CASE("graph of a plus has one degree-4 branch") {
  BitMask m(31, 31);
  for (int i = 0; i < 31; ++i) {
    for (int k = -1; k <= 1; ++k) {
      m.set(i, 15 + k);
      m.set(15 + k, i);
    }
  }
  const auto g = build_skeleton_graph(prune_spurs(skeletonize(m)));
  CHECK(count(g, NodeKind::End) == 4);
  REQUIRE(count(g, NodeKind::Branch) == 1);
  for (const auto& n : g.nodes) {
    if (n.kind == NodeKind::Branch) {
      CHECK(n.degree == 4);
      CHECK(std::abs(n.at.x - 15) <= 1);
      CHECK(std::abs(n.at.y - 15) <= 1);
    }
  }
}

TEST_CASE("node classification follows degree") {
  testutil::Rng rng(35);
  for (int i = 0; i < 40; ++i) {
    const auto g = build_skeleton_graph(prune_spurs(skeletonize(testutil::random_stroke_mask(rng))));
    for (const auto& n : g.nodes) {
      if (n.kind == NodeKind::End) CHECK(n.degree <= 1);
      if (n.kind == NodeKind::Branch) CHECK(n.degree >= 3);
      if (n.kind == NodeKind::Turn) CHECK(n.degree == 2);
    }
  }
}

TEST_CASE("a 20 px diagonal staircase fits one segment") {
  std::vector<Point> pts;
  for (int i = 0; i < 20; ++i) pts.push_back({i, i});
  const auto segs = fit_segments(build_skeleton_graph(line(22, 22, pts)));
  REQUIRE(segs.size() == 1);
  // oracle: every pixel is within 1.5 px of the chord
  for (auto p : pts) CHECK(point_segment_distance(p, segs[0]) <= 1.5);
}

TEST_CASE("fitted segments cover every skeleton pixel") {
  testutil::Rng rng(36);
  for (int i = 0; i < 40; ++i) {
    const BitMask s = prune_spurs(skeletonize(testutil::random_stroke_mask(rng)));
    const auto g = build_skeleton_graph(s);
    const auto segs = fit_segments(g, 1.5);
    for (const auto& e : g.edges) {
      for (Point p : e.path) {
        double best = 1e9;
        for (const auto& sg : segs) best = std::min(best, point_segment_distance(p, sg));
        CHECK(best <= 1.5 + 1e-9);
      }
    }
  }
}

TEST_CASE("vectorize_nets keeps labels and fits straight nets") {
  LabelMap lm(40, 20);
  for (int x = 2; x < 38; ++x) {
    for (int y = 4; y < 7; ++y) lm.set(x, y, 1);
    for (int y = 13; y < 16; ++y) lm.set(x, y, 2);
  }
  lm.set_label_count(2);
  const auto nets = vectorize_nets(lm);
  REQUIRE(nets.size() == 2);
  CHECK(nets[0].label == 1);
  CHECK(nets[1].label == 2);
  for (const auto& n : nets) {
    CHECK(n.segments.size() == 1);
    CHECK(n.ends.size() == 2);
    // keypoints sit on segment endpoints
    for (Point e : n.ends) {
      bool on = false;
      for (const auto& s : n.segments) on = on || s.a() == e || s.b() == e;
      CHECK(on);
    }
  }
}

TEST_CASE("resolved X vectorizes to two full-length strokes") {
  BitMask m(61, 61);
  for (int i = 0; i < 61; ++i) {
    for (int k = -1; k <= 1; ++k) {
      m.set(i, 30 + k);
      m.set(30 + k, i);
    }
  }
  const auto res = resolve_crossings(connected_components(m), std::vector<CrossPoint>{{{30, 30}, CrossKind::Crossing}}, 3);
  const auto nets = vectorize_nets(res.labels);
  REQUIRE(nets.size() == 2);
  std::vector<std::set<Point>> spans;
  for (const auto& n : nets) {
    REQUIRE(n.segments.size() == 1);
    spans.push_back({n.segments[0].a(), n.segments[0].b()});
  }
  // generating strokes run (0,30)-(60,30) and (30,0)-(30,60)
  auto near = [](Point a, Point b) { return std::abs(a.x - b.x) <= 2 && std::abs(a.y - b.y) <= 2; };
  int matched = 0;
  for (const auto& s : spans) {
    const Point a = *s.begin(), b = *s.rbegin();
    matched += (near(a, {0, 30}) && near(b, {60, 30})) || (near(a, {30, 0}) && near(b, {30, 60}));
  }
  CHECK(matched == 2);
}

TEST_CASE("serial and parallel vectorization agree") {
  testutil::Rng rng(37);
  for (int i = 0; i < 10; ++i) {
    const LabelMap lm = connected_components(testutil::random_stroke_mask(rng, 150, 150));
    VectorizeOptions s, p;
    s.exec = Exec::Serial;
    p.exec = Exec::Parallel;
    CHECK(vectorize_nets(lm, s) == vectorize_nets(lm, p));
  }
}

TEST_CASE("vectorize label set equals the map label set") {
  testutil::Rng rng(38);
  for (int i = 0; i < 20; ++i) {
    const LabelMap lm = connected_components(testutil::random_stroke_mask(rng));
    const auto nets = vectorize_nets(lm);
    std::set<int> a, b;
    for (int v : lm.data()) {
      if (v) a.insert(v);
    }
    for (const auto& n : nets) {
      b.insert(n.label);
      if (n.pixel_count >= 2) CHECK_FALSE(n.segments.empty());
    }
    CHECK(a == b);
  }
}
