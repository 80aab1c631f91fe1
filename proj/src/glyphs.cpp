#include "netlift/glyphs.hpp"

#include <cmath>
#include <map>

#include "netlift/connectivity.hpp"

namespace netlift {

namespace {

GlyphStroke line(double u0, double v0, double u1, double v1) { return {{{u0, v0}, {u1, v1}}, false, false}; }

GlyphStroke poly(std::vector<UnitPoint> pts, bool closed = false, bool filled = false) {
  return {std::move(pts), closed, filled};
}

GlyphStroke ellipse(double cu, double cv, double ru, double rv) {
  GlyphStroke s;
  s.closed = true;
  for (int i = 0; i < 32; ++i) {
    const double a = 2 * M_PI * i / 32.0;
    s.pts.emplace_back(cu + ru * std::cos(a), cv + rv * std::sin(a));
  }
  return s;
}

std::vector<GlyphStroke> mos(bool pmos) {
  std::vector<GlyphStroke> g;
  g.push_back(line(0.0, 0.5, pmos ? 0.2 : 0.35, 0.5));
  if (pmos) g.push_back(ellipse(0.275, 0.5, 0.075, 0.075));
  g.push_back(line(0.35, 0.2, 0.35, 0.8));
  g.push_back(line(0.5, 0.12, 0.5, 0.88));
  g.push_back(line(0.5, 0.25, 1.0, 0.25));
  g.push_back(line(0.5, 0.75, 1.0, 0.75));
  // Bulk lead stops short of the edge: the bulk is usually left undrawn.
  g.push_back(line(0.5, 0.5, 0.8, 0.5));
  if (pmos) {
    g.push_back(poly({{0.66, 0.68}, {0.58, 0.75}, {0.66, 0.82}}));
  } else {
    g.push_back(poly({{0.72, 0.68}, {0.8, 0.75}, {0.72, 0.82}}));
  }
  return g;
}

std::map<ElementType, std::vector<GlyphStroke>> build() {
  std::map<ElementType, std::vector<GlyphStroke>> m;
  {
    std::vector<UnitPoint> zz{{0.5, 0.0}, {0.5, 0.2}};
    for (int i = 0; i < 6; ++i) zz.emplace_back(i % 2 == 0 ? 0.8 : 0.2, 0.25 + 0.1 * i);
    zz.emplace_back(0.5, 0.8);
    zz.emplace_back(0.5, 1.0);
    m[ElementType::Resistor] = {poly(zz)};
  }
  m[ElementType::Capacitor] = {line(0.5, 0.0, 0.5, 0.42), line(0.05, 0.42, 0.95, 0.42),
                               line(0.05, 0.58, 0.95, 0.58), line(0.5, 0.58, 0.5, 1.0)};
  {
    std::vector<UnitPoint> coil{{0.5, 0.0}, {0.5, 0.2}};
    for (int b = 0; b < 4; ++b) {
      const double v0 = 0.2 + 0.15 * b;
      for (int k = 1; k <= 8; ++k) {
        const double a = M_PI * k / 8.0;
        coil.emplace_back(0.5 + 0.3 * std::sin(a), v0 + 0.075 * (1 - std::cos(a)));
      }
    }
    coil.emplace_back(0.5, 1.0);
    m[ElementType::Inductor] = {poly(coil)};
  }
  m[ElementType::Diode] = {line(0.5, 0.0, 0.5, 0.3), poly({{0.15, 0.3}, {0.85, 0.3}, {0.5, 0.7}}, true, true),
                           line(0.15, 0.7, 0.85, 0.7), line(0.5, 0.7, 0.5, 1.0)};
  m[ElementType::VSource] = {line(0.5, 0.0, 0.5, 0.1),   ellipse(0.5, 0.5, 0.4, 0.4),  line(0.5, 0.22, 0.5, 0.42),
                             line(0.4, 0.32, 0.6, 0.32), line(0.4, 0.7, 0.6, 0.7),     line(0.5, 0.9, 0.5, 1.0)};
  m[ElementType::ISource] = {line(0.5, 0.0, 0.5, 0.1), ellipse(0.5, 0.5, 0.4, 0.4), line(0.5, 0.72, 0.5, 0.28),
                             poly({{0.4, 0.4}, {0.5, 0.28}, {0.6, 0.4}}), line(0.5, 0.9, 0.5, 1.0)};
  m[ElementType::NMOS] = mos(false);
  m[ElementType::PMOS] = mos(true);
  m[ElementType::OpAmp] = {poly({{0.15, 0.05}, {0.15, 0.95}, {0.9, 0.5}}, true),
                           line(0.0, 0.25, 0.15, 0.25),
                           line(0.0, 0.75, 0.15, 0.75),
                           line(0.9, 0.5, 1.0, 0.5),
                           line(0.22, 0.25, 0.34, 0.25),
                           line(0.28, 0.19, 0.28, 0.31),
                           line(0.22, 0.75, 0.34, 0.75)};
  m[ElementType::Gnd] = {line(0.5, 0.0, 0.5, 0.45), line(0.05, 0.45, 0.95, 0.45), line(0.25, 0.67, 0.75, 0.67),
                         line(0.4, 0.89, 0.6, 0.89)};
  m[ElementType::Vdd] = {line(0.5, 0.0, 0.5, 0.55), line(0.1, 0.55, 0.9, 0.55),
                         poly({{0.3, 0.55}, {0.5, 0.9}, {0.7, 0.55}}, true)};
  m[ElementType::Port] = {line(0.5, 0.0, 0.5, 0.3), ellipse(0.5, 0.62, 0.32, 0.32)};
  return m;
}

}  // namespace

const std::vector<GlyphStroke>& glyph(ElementType t) {
  static const auto lib = build();
  return lib.at(t);
}

std::vector<GlyphStroke> placed_glyph(const ElementDetection& det) {
  std::vector<GlyphStroke> out = glyph(det.etype);
  for (auto& s : out) {
    for (auto& p : s.pts) p = anchor_to_image(det.bbox, det.rotation, p.first, p.second);
  }
  return out;
}

}  // namespace netlift
