#pragma once

#include <vector>

#include "netlift/exec.hpp"
#include "netlift/geometry.hpp"

namespace netlift {

enum class NodeKind { End, Branch, Turn };

struct SkeletonNode {
  Point at;
  NodeKind kind = NodeKind::End;
  int degree = 0;
  std::vector<Point> pixels;  // skeleton pixels merged into this node
};

struct SkeletonEdge {
  int a = 0;
  int b = 0;
  // From nodes[a].at to nodes[b].at inclusive.
  std::vector<Point> path;
};

struct SkeletonGraph {
  std::vector<SkeletonNode> nodes;
  std::vector<SkeletonEdge> edges;
};

// Zhang-Suen thinning followed by removal of 8-simple non-end pixels, which
// leaves no pixel with all four of N/S/E/W set.
BitMask skeletonize(const BitMask& mask, Exec exec = Exec::Parallel);

// Deletes End-terminated branches shorter than `min_length` pixels that hang
// off a junction. Isolated short strokes are kept.
BitMask prune_spurs(const BitMask& skeleton, int min_length = 4);

int skeleton_degree(const BitMask& skeleton, int x, int y);

// Degree-1 pixels become End nodes, 8-connected clusters of degree >= 3
// pixels become one Branch node each, and direction changes larger than
// `turn_tolerance_deg` along an edge become Turn nodes splitting it.
SkeletonGraph build_skeleton_graph(const BitMask& skeleton, double turn_tolerance_deg = 30.0);

// Douglas-Peucker over every edge path.
std::vector<Segment> fit_segments(const SkeletonGraph& g, double max_deviation = 1.5);

struct VectorizeOptions {
  double turn_tolerance_deg = 30.0;
  double max_deviation = 1.5;
  int spur_length = 4;
  // End points of separate pieces of one net closer than this get bridged.
  double bridge_gap = 24.0;
  Exec exec = Exec::Parallel;
};

// One NetGeometry per label, ordered by label.
std::vector<NetGeometry> vectorize_nets(const LabelMap& lmap, const VectorizeOptions& opts = {});

}  // namespace netlift
