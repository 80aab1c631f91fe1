#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netlift/error.hpp"

namespace netlift {

// Pixel coordinates: origin top-left, y grows downward.
struct Point {
  int x = 0;
  int y = 0;

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

struct Size {
  int width = 0;
  int height = 0;

  friend bool operator==(const Size&, const Size&) = default;
};

// Axis-aligned box with inclusive corners. A box with min > max on either
// axis cannot be constructed.
class BBox {
 public:
  BBox() = default;
  BBox(Point min, Point max);
  BBox(int x0, int y0, int x1, int y1) : BBox(Point{x0, y0}, Point{x1, y1}) {}

  Point min() const { return min_; }
  Point max() const { return max_; }
  int width() const { return max_.x - min_.x; }
  int height() const { return max_.y - min_.y; }

  // Grown by `margin` on every side; a negative margin never inverts the box.
  BBox expanded(int margin) const;

  friend bool operator==(const BBox&, const BBox&) = default;

 private:
  Point min_{};
  Point max_{};
};

bool bbox_contains(const BBox& b, Point p);
bool bbox_intersects(const BBox& a, const BBox& b);

class Segment {
 public:
  Segment(Point a, Point b);

  Point a() const { return a_; }
  Point b() const { return b_; }

  friend bool operator==(const Segment&, const Segment&) = default;

 private:
  Point a_;
  Point b_;
};

double point_segment_distance(double px, double py, Point a, Point b);
inline double point_segment_distance(Point p, const Segment& s) {
  return point_segment_distance(p.x, p.y, s.a(), s.b());
}

enum class ElementType {
  NMOS,
  PMOS,
  Resistor,
  Capacitor,
  Inductor,
  Diode,
  VSource,
  ISource,
  OpAmp,
  Gnd,
  Vdd,
  Port,
};

inline constexpr ElementType kAllElementTypes[] = {
    ElementType::NMOS,    ElementType::PMOS,    ElementType::Resistor, ElementType::Capacitor,
    ElementType::Inductor, ElementType::Diode,   ElementType::VSource,  ElementType::ISource,
    ElementType::OpAmp,   ElementType::Gnd,     ElementType::Vdd,      ElementType::Port,
};

// Lowercase keyword used in every text format ("nmos", "resistor", ...).
std::string_view to_string(ElementType t);
// Case-insensitive; throws FormatError on anything outside the closed set.
ElementType element_type_from_string(std::string_view name);

// Gnd, Vdd and Port name nets rather than appearing as netlist components.
inline bool is_symbol(ElementType t) {
  return t == ElementType::Gnd || t == ElementType::Vdd || t == ElementType::Port;
}

enum class Angle { Deg0 = 0, Deg90 = 90, Deg180 = 180, Deg270 = 270 };

Angle angle_from_degrees(int deg);
inline int degrees(Angle a) { return static_cast<int>(a); }
// Quarter-turn count: 0..3.
inline int quarter_turns(Angle a) { return degrees(a) / 90; }
Angle add_quarter_turns(Angle a, int turns);

// Clockwise (in the y-down image frame) rotation, mirroring applied first.
struct Rotation {
  Angle angle = Angle::Deg0;
  bool mirrored = false;

  friend bool operator==(const Rotation&, const Rotation&) = default;
};

// Maps `p` from an image of `size` into the rotated image frame. Quarter
// turns swap width and height of the frame.
//   (x, y) --90--> (h - 1 - y, x)
Point rotate_point(Point p, Rotation r, Size size);
Size rotated_size(Size size, Angle a);

struct ElementDetection {
  std::string id;
  ElementType etype = ElementType::Resistor;
  BBox bbox;
  Rotation rotation;

  friend bool operator==(const ElementDetection&, const ElementDetection&) = default;
};

enum class CrossKind { Crossing, Junction };

struct CrossPoint {
  Point at;
  CrossKind kind = CrossKind::Crossing;

  friend bool operator==(const CrossPoint&, const CrossPoint&) = default;
};

// Row-major binary raster. One byte per pixel, 0 or 1.
class BitMask {
 public:
  BitMask() = default;
  BitMask(int width, int height, bool fill = false);

  int width() const { return width_; }
  int height() const { return height_; }
  Size size() const { return {width_, height_}; }
  bool empty() const { return width_ == 0 || height_ == 0; }

  bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
  bool get(int x, int y) const { return bits_[index(x, y)] != 0; }
  // Out-of-bounds reads are background.
  bool at(int x, int y) const { return in_bounds(x, y) && bits_[index(x, y)] != 0; }
  void set(int x, int y, bool v = true) { bits_[index(x, y)] = v ? 1 : 0; }

  std::size_t count() const;
  std::vector<std::uint8_t>& data() { return bits_; }
  const std::vector<std::uint8_t>& data() const { return bits_; }

  friend bool operator==(const BitMask&, const BitMask&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Net labels per pixel, 0 = background, otherwise dense 1..K.
class LabelMap {
 public:
  LabelMap() = default;
  LabelMap(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  Size size() const { return {width_, height_}; }

  bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
  int get(int x, int y) const { return labels_[index(x, y)]; }
  int at(int x, int y) const { return in_bounds(x, y) ? labels_[index(x, y)] : 0; }
  void set(int x, int y, int label) { labels_[index(x, y)] = label; }

  int label_count() const { return label_count_; }
  void set_label_count(int k) { label_count_ = k; }

  std::vector<std::int32_t>& data() { return labels_; }
  const std::vector<std::int32_t>& data() const { return labels_; }

  // Renumbers labels 1..K by first row-major encounter. Returns K.
  int densify();
  BitMask mask() const;
  BitMask mask_of(int label) const;

  friend bool operator==(const LabelMap&, const LabelMap&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  int label_count_ = 0;
  std::vector<std::int32_t> labels_;
};

struct NetGeometry {
  int label = 0;
  std::vector<Segment> segments;
  std::vector<Point> ends;
  std::vector<Point> branches;
  std::vector<Point> turns;
  // Pixel count of the net region; needed to bind pins to nets too small to
  // carry a segment.
  std::size_t pixel_count = 0;
  std::optional<Point> anchor;  // a pixel of the net, set when segments is empty

  friend bool operator==(const NetGeometry&, const NetGeometry&) = default;
};

// Minimal Euclidean distance from `p` to the net's segments (or its anchor
// pixel when it has none). Infinity for a net with neither.
double distance_to_net(Point p, const NetGeometry& net);

}  // namespace netlift
