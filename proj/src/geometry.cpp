#include "netlift/geometry.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace netlift {

BBox::BBox(Point min, Point max) : min_(min), max_(max) {
  if (min.x > max.x || min.y > max.y) {
    throw ValidationError("bbox min (" + std::to_string(min.x) + "," + std::to_string(min.y) +
                          ") exceeds max (" + std::to_string(max.x) + "," + std::to_string(max.y) + ")");
  }
}

BBox BBox::expanded(int margin) const {
  Point lo{min_.x - margin, min_.y - margin};
  Point hi{max_.x + margin, max_.y + margin};
  if (lo.x > hi.x) lo.x = hi.x = (min_.x + max_.x) / 2;
  if (lo.y > hi.y) lo.y = hi.y = (min_.y + max_.y) / 2;
  return BBox(lo, hi);
}

bool bbox_contains(const BBox& b, Point p) {
  return p.x >= b.min().x && p.x <= b.max().x && p.y >= b.min().y && p.y <= b.max().y;
}

bool bbox_intersects(const BBox& a, const BBox& b) {
  return a.min().x <= b.max().x && b.min().x <= a.max().x && a.min().y <= b.max().y &&
         b.min().y <= a.max().y;
}

Segment::Segment(Point a, Point b) : a_(a), b_(b) {
  if (a == b) throw ValidationError("degenerate segment at (" + std::to_string(a.x) + "," + std::to_string(a.y) + ")");
}

double point_segment_distance(double px, double py, Point a, Point b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((px - a.x) * dx + (py - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double cx = a.x + t * dx - px;
  const double cy = a.y + t * dy - py;
  return std::sqrt(cx * cx + cy * cy);
}

std::string_view to_string(ElementType t) {
  switch (t) {
    case ElementType::NMOS: return "nmos";
    case ElementType::PMOS: return "pmos";
    case ElementType::Resistor: return "resistor";
    case ElementType::Capacitor: return "capacitor";
    case ElementType::Inductor: return "inductor";
    case ElementType::Diode: return "diode";
    case ElementType::VSource: return "vsource";
    case ElementType::ISource: return "isource";
    case ElementType::OpAmp: return "opamp";
    case ElementType::Gnd: return "gnd";
    case ElementType::Vdd: return "vdd";
    case ElementType::Port: return "port";
  }
  return "?";
}

ElementType element_type_from_string(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (ElementType t : kAllElementTypes) {
    if (to_string(t) == lower) return t;
  }
  throw FormatError("unknown element type '" + std::string(name) + "'");
}

Angle angle_from_degrees(int deg) {
  switch (deg) {
    case 0: return Angle::Deg0;
    case 90: return Angle::Deg90;
    case 180: return Angle::Deg180;
    case 270: return Angle::Deg270;
    default: throw FormatError("rotation must be 0, 90, 180 or 270, got " + std::to_string(deg));
  }
}

Angle add_quarter_turns(Angle a, int turns) {
  int q = ((quarter_turns(a) + turns) % 4 + 4) % 4;
  return static_cast<Angle>(q * 90);
}

Size rotated_size(Size size, Angle a) {
  return quarter_turns(a) % 2 == 0 ? size : Size{size.height, size.width};
}

Point rotate_point(Point p, Rotation r, Size size) {
  if (p.x < 0 || p.y < 0 || p.x >= size.width || p.y >= size.height) {
    throw ValidationError("point (" + std::to_string(p.x) + "," + std::to_string(p.y) + ") outside " +
                          std::to_string(size.width) + "x" + std::to_string(size.height));
  }
  const int w = size.width;
  const int h = size.height;
  if (r.mirrored) p.x = w - 1 - p.x;
  switch (r.angle) {
    case Angle::Deg0: return p;
    case Angle::Deg90: return {h - 1 - p.y, p.x};
    case Angle::Deg180: return {w - 1 - p.x, h - 1 - p.y};
    case Angle::Deg270: return {p.y, w - 1 - p.x};
  }
  return p;
}

BitMask::BitMask(int width, int height, bool fill)
    : width_(width), height_(height),
      bits_(static_cast<std::size_t>(std::max(width, 0)) * static_cast<std::size_t>(std::max(height, 0)),
            fill ? 1 : 0) {
  if (width < 0 || height < 0) throw ValidationError("negative mask dimensions");
}

std::size_t BitMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

LabelMap::LabelMap(int width, int height)
    : width_(width), height_(height),
      labels_(static_cast<std::size_t>(std::max(width, 0)) * static_cast<std::size_t>(std::max(height, 0)), 0) {
  if (width < 0 || height < 0) throw ValidationError("negative label map dimensions");
}

int LabelMap::densify() {
  std::unordered_map<int, int> remap;
  int next = 0;
  for (auto& v : labels_) {
    if (v == 0) continue;
    auto [it, inserted] = remap.try_emplace(v, next + 1);
    if (inserted) ++next;
    v = it->second;
  }
  label_count_ = next;
  return next;
}

BitMask LabelMap::mask() const {
  BitMask m(width_, height_);
  for (std::size_t i = 0; i < labels_.size(); ++i) m.data()[i] = labels_[i] != 0 ? 1 : 0;
  return m;
}

BitMask LabelMap::mask_of(int label) const {
  BitMask m(width_, height_);
  for (std::size_t i = 0; i < labels_.size(); ++i) m.data()[i] = labels_[i] == label ? 1 : 0;
  return m;
}

double distance_to_net(Point p, const NetGeometry& net) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : net.segments) best = std::min(best, point_segment_distance(p, s));
  if (net.segments.empty() && net.anchor) {
    const double dx = p.x - net.anchor->x;
    const double dy = p.y - net.anchor->y;
    best = std::sqrt(dx * dx + dy * dy);
  }
  return best;
}

}  // namespace netlift
