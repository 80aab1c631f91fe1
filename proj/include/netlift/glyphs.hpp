#pragma once

#include <utility>
#include <vector>

#include "netlift/geometry.hpp"

namespace netlift {

using UnitPoint = std::pair<double, double>;

// One drawing primitive of a symbol, in (u, v) coordinates of the unrotated
// bounding box. Every lead ends exactly on the pin anchor of the builtin
// pin table.
struct GlyphStroke {
  std::vector<UnitPoint> pts;
  bool closed = false;
  bool filled = false;
};

const std::vector<GlyphStroke>& glyph(ElementType t);

// The glyph of `det` mapped into image coordinates.
std::vector<GlyphStroke> placed_glyph(const ElementDetection& det);

}  // namespace netlift
