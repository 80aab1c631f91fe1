#include <doctest.h>

#include "netlift/error.hpp"
#include "netlift/geometry.hpp"
#include "test_util.hpp"

using namespace netlift;

TEST_CASE("rotate_point maps corners and points") {
  CHECK(rotate_point({0, 0}, {Angle::Deg90, false}, {10, 10}) == Point{9, 0});
  CHECK(rotate_point({3, 4}, {Angle::Deg0, false}, {17, 9}) == Point{3, 4});
  CHECK(rotate_point({3, 4}, {Angle::Deg180, false}, {10, 10}) == Point{6, 5});
  CHECK_THROWS_AS(rotate_point({10, 0}, {Angle::Deg90, false}, {10, 10}), Error);
}

TEST_CASE("four quarter turns are the identity") {
  testutil::Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    Size s{rng.uniform(1, 30), rng.uniform(1, 30)};
    Point p{rng.uniform(0, s.width - 1), rng.uniform(0, s.height - 1)};
    Point q = p;
    Size cur = s;
    for (int k = 0; k < 4; ++k) {
      q = rotate_point(q, {Angle::Deg90, false}, cur);
      cur = rotated_size(cur, Angle::Deg90);
    }
    CHECK(q == p);
    CHECK(cur == s);
  }
}

TEST_CASE("bbox_contains is inclusive") {
  CHECK(bbox_contains(BBox(0, 0, 5, 5), {5, 5}));
  CHECK_FALSE(bbox_contains(BBox(0, 0, 5, 5), {6, 5}));
  CHECK(bbox_contains(BBox(2, 2, 2, 2), {2, 2}));
}

TEST_CASE("bbox invariants are enforced, never reordered") {
  CHECK_THROWS_AS(BBox(5, 0, 4, 3), ValidationError);
  CHECK_THROWS_AS(BBox(0, 5, 4, 3), ValidationError);
  CHECK(BBox(1, 1, 3, 3).expanded(-5) == BBox(2, 2, 2, 2));
  CHECK(BBox(1, 1, 3, 3).expanded(2) == BBox(-1, -1, 5, 5));
}

TEST_CASE("segments reject coincident endpoints") {
  CHECK_THROWS_AS(Segment({1, 1}, {1, 1}), ValidationError);
  const Segment s({0, 0}, {10, 0});
  CHECK(point_segment_distance({5, 3}, s) == doctest::Approx(3.0));
  CHECK(point_segment_distance({13, 4}, s) == doctest::Approx(5.0));
}

TEST_CASE("element type names are a closed set") {
  for (ElementType t : kAllElementTypes) CHECK(element_type_from_string(to_string(t)) == t);
  CHECK(element_type_from_string("NMOS") == ElementType::NMOS);
  CHECK_THROWS_AS(element_type_from_string("transistor"), FormatError);
}

TEST_CASE("only quarter-turn angles exist") {
  CHECK(angle_from_degrees(270) == Angle::Deg270);
  CHECK_THROWS_AS(angle_from_degrees(45), FormatError);
  CHECK(add_quarter_turns(Angle::Deg270, 1) == Angle::Deg0);
  CHECK(add_quarter_turns(Angle::Deg0, -1) == Angle::Deg270);
}

TEST_CASE("label maps densify to 1..K") {
  LabelMap lm(4, 1);
  lm.set(0, 0, 7);
  lm.set(1, 0, 3);
  lm.set(3, 0, 7);
  CHECK(lm.densify() == 2);
  CHECK(lm.get(0, 0) == 1);
  CHECK(lm.get(1, 0) == 2);
  CHECK(lm.get(2, 0) == 0);
  CHECK(lm.get(3, 0) == 1);
  CHECK(lm.label_count() == 2);
}

TEST_CASE("distance to a net falls back to its anchor") {
  NetGeometry n;
  CHECK(std::isinf(distance_to_net({0, 0}, n)));
  n.anchor = Point{3, 4};
  CHECK(distance_to_net({0, 0}, n) == doctest::Approx(5.0));
  n.segments.emplace_back(Point{0, 1}, Point{5, 1});
  CHECK(distance_to_net({0, 0}, n) == doctest::Approx(1.0));
}
