#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "netlift/geometry.hpp"

namespace netlift {

struct Stub {
  Point contact;         // rounded centroid of the stub's annulus pixels
  double cx = 0, cy = 0;  // exact centroid
  double angle = 0;       // radians in [0, 2pi), atan2 in the y-down frame
  int label_before = 0;
};

// How one Crossing cross point was split. `pairing` lists stub index pairs
// merged into one net; it is empty when the crossing was left merged.
struct CrossingResolution {
  Point at;
  int radius = 0;
  std::vector<Stub> stubs;  // ascending angle
  std::vector<std::pair<int, int>> pairing;
  bool degraded = false;
  std::string note;
};

struct ResolveResult {
  LabelMap labels;
  std::vector<CrossingResolution> resolutions;
};

// 8-connected labelling, labels numbered by first row-major encounter.
LabelMap connected_components(const BitMask& mask);

// Median over wire pixels of min(horizontal run, vertical run). Returns 1
// for an empty mask.
int estimate_stroke(const BitMask& mask);

// Base radius of the disk cleared around a crossing.
inline int crossing_radius(int stroke) { return std::max(3, 2 * stroke); }

// Splits connected components at Crossing points and re-merges opposite
// stubs. Junction points are left alone. Throws ValidationError when a
// Crossing has no labelled pixel within the base radius.
ResolveResult resolve_crossings(const LabelMap& lmap, std::span<const CrossPoint> crossings, int stroke);

// Fallback when detections carry no cross points: degree >= 4 skeleton
// nodes become cross points, Junction when the ink around them is a dot.
std::vector<CrossPoint> infer_crosspoints(const BitMask& mask, const BitMask& skeleton);

}  // namespace netlift
