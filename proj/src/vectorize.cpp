#include "netlift/vectorize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

namespace netlift {

namespace {

constexpr std::array<int, 8> kDx = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr std::array<int, 8> kDy = {-1, -1, 0, 1, 1, 1, 0, -1};

// Zero-padded working copy so neighbour reads never leave the buffer.
struct Padded {
  int w = 0;
  int h = 0;
  std::vector<std::uint8_t> px;

  explicit Padded(const BitMask& m) : w(m.width() + 2), h(m.height() + 2), px(static_cast<std::size_t>(w) * h, 0) {
    for (int y = 0; y < m.height(); ++y) {
      for (int x = 0; x < m.width(); ++x) px[idx(x + 1, y + 1)] = m.get(x, y) ? 1 : 0;
    }
  }
  std::size_t idx(int x, int y) const { return static_cast<std::size_t>(y) * w + x; }
  std::uint8_t operator()(int x, int y) const { return px[idx(x, y)]; }

  BitMask unpad() const {
    BitMask m(w - 2, h - 2);
    for (int y = 1; y < h - 1; ++y) {
      for (int x = 1; x < w - 1; ++x) m.set(x - 1, y - 1, px[idx(x, y)] != 0);
    }
    return m;
  }
};

// Neighbours P2..P9 clockwise from north.
inline std::array<int, 8> neighbours(const Padded& p, int x, int y) {
  return {p(x, y - 1), p(x + 1, y - 1), p(x + 1, y), p(x + 1, y + 1),
          p(x, y + 1), p(x - 1, y + 1), p(x - 1, y), p(x - 1, y - 1)};
}

inline bool zs_deletable(const Padded& p, int x, int y, int pass) {
  const auto n = neighbours(p, x, y);
  const int b = n[0] + n[1] + n[2] + n[3] + n[4] + n[5] + n[6] + n[7];
  if (b < 2 || b > 6) return false;
  int a = 0;
  for (int k = 0; k < 8; ++k) a += (n[k] == 0 && n[(k + 1) % 8] == 1) ? 1 : 0;
  if (a != 1) return false;
  const int p2 = n[0], p4 = n[2], p6 = n[4], p8 = n[6];
  if (pass == 0) return p2 * p4 * p6 == 0 && p4 * p6 * p8 == 0;
  return p2 * p4 * p8 == 0 && p2 * p6 * p8 == 0;
}

// One Zhang-Suen sub-iteration: mark from the current image, then delete.
std::size_t zs_pass(Padded& p, std::vector<std::uint8_t>& marks, int pass, Exec exec) {
  std::fill(marks.begin(), marks.end(), 0);
  std::size_t changed = 0;
  if (exec == Exec::Serial) {
    for (int y = 1; y < p.h - 1; ++y) {
      for (int x = 1; x < p.w - 1; ++x) {
        if (p(x, y) && zs_deletable(p, x, y, pass)) {
          marks[p.idx(x, y)] = 1;
          ++changed;
        }
      }
    }
  } else {
#pragma omp parallel for schedule(static) reduction(+ : changed)
    for (int y = 1; y < p.h - 1; ++y) {
      for (int x = 1; x < p.w - 1; ++x) {
        if (p(x, y) && zs_deletable(p, x, y, pass)) {
          marks[p.idx(x, y)] = 1;
          ++changed;
        }
      }
    }
  }
  if (changed == 0) return 0;
  for (std::size_t i = 0; i < p.px.size(); ++i) {
    if (marks[i]) p.px[i] = 0;
  }
  return changed;
}

// True when the set neighbours of (x, y) form exactly one 8-connected group
// inside the 3x3 window, i.e. deleting (x, y) keeps local connectivity.
bool single_neighbour_group(const Padded& p, int x, int y) {
  const auto n = neighbours(p, x, y);
  std::array<bool, 8> seen{};
  int groups = 0;
  for (int s = 0; s < 8; ++s) {
    if (!n[s] || seen[s]) continue;
    ++groups;
    std::array<int, 8> stack{};
    int top = 0;
    stack[top++] = s;
    seen[s] = true;
    while (top > 0) {
      const int k = stack[--top];
      const int kx = kDx[k], ky = kDy[k];
      for (int j = 0; j < 8; ++j) {
        if (!n[j] || seen[j]) continue;
        if (std::abs(kDx[j] - kx) <= 1 && std::abs(kDy[j] - ky) <= 1) {
          seen[j] = true;
          stack[top++] = j;
        }
      }
    }
  }
  return groups == 1;
}

}  // namespace

BitMask skeletonize(const BitMask& mask, Exec exec) {
  if (mask.empty()) return mask;
  Padded p(mask);
  std::vector<std::uint8_t> marks(p.px.size(), 0);
  while (true) {
    const std::size_t a = zs_pass(p, marks, 0, exec);
    const std::size_t b = zs_pass(p, marks, 1, exec);
    if (a + b == 0) break;
  }
  // Zhang-Suen leaves 2-px staircases and 4-neighbour crosses; strip the
  // redundant pixels in raster order until stable.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int y = 1; y < p.h - 1; ++y) {
      for (int x = 1; x < p.w - 1; ++x) {
        if (!p(x, y)) continue;
        const auto n = neighbours(p, x, y);
        const int b = std::accumulate(n.begin(), n.end(), 0);
        if (b < 2) continue;
        if (single_neighbour_group(p, x, y)) {
          p.px[p.idx(x, y)] = 0;
          changed = true;
        }
      }
    }
  }
  return p.unpad();
}

int skeleton_degree(const BitMask& s, int x, int y) {
  int d = 0;
  for (int k = 0; k < 8; ++k) d += s.at(x + kDx[k], y + kDy[k]) ? 1 : 0;
  return d;
}

namespace {

// Graph adjacency: a diagonal step only counts when neither shared
// orthogonal pixel is set, so a 4-connected staircase corner stays a chain
// instead of a 3-pixel triangle. Connectivity is unchanged.
bool linked(const BitMask& s, int x, int y, int k) {
  if (!s.at(x + kDx[k], y + kDy[k])) return false;
  if (kDx[k] != 0 && kDy[k] != 0) return !s.at(x + kDx[k], y) && !s.at(x, y + kDy[k]);
  return true;
}

int linked_degree(const BitMask& s, int x, int y) {
  int d = 0;
  for (int k = 0; k < 8; ++k) d += linked(s, x, y, k) ? 1 : 0;
  return d;
}

struct GraphBuilder {
  const BitMask& s;
  int w, h;
  std::vector<int> node_of;  // per pixel, -1 if not a node pixel
  std::vector<std::uint8_t> visited;
  std::vector<int> deg;
  SkeletonGraph g;
  std::set<std::pair<std::size_t, std::size_t>> node_links;

  explicit GraphBuilder(const BitMask& sk)
      : s(sk), w(sk.width()), h(sk.height()),
        node_of(static_cast<std::size_t>(w) * h, -1),
        visited(static_cast<std::size_t>(w) * h, 0),
        deg(static_cast<std::size_t>(w) * h, 0) {}

  std::size_t idx(int x, int y) const { return static_cast<std::size_t>(y) * w + x; }

  void find_nodes() {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (s.get(x, y)) deg[idx(x, y)] = linked_degree(s, x, y);
      }
    }
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (!s.get(x, y) || node_of[idx(x, y)] >= 0) continue;
        const int d = deg[idx(x, y)];
        if (d == 2) continue;
        SkeletonNode n;
        const int id = static_cast<int>(g.nodes.size());
        if (d <= 1) {
          n.kind = NodeKind::End;
          n.at = {x, y};
          n.pixels = {{x, y}};
          node_of[idx(x, y)] = id;
        } else {
          n.kind = NodeKind::Branch;
          std::vector<Point> stack{{x, y}};
          node_of[idx(x, y)] = id;
          while (!stack.empty()) {
            Point q = stack.back();
            stack.pop_back();
            n.pixels.push_back(q);
            for (int k = 0; k < 8; ++k) {
              const int nx = q.x + kDx[k], ny = q.y + kDy[k];
              if (!linked(s, q.x, q.y, k) || node_of[idx(nx, ny)] >= 0 || deg[idx(nx, ny)] < 3) continue;
              node_of[idx(nx, ny)] = id;
              stack.push_back({nx, ny});
            }
          }
          std::sort(n.pixels.begin(), n.pixels.end(),
                    [](Point a, Point b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });
          double sx = 0, sy = 0;
          for (auto q : n.pixels) {
            sx += q.x;
            sy += q.y;
          }
          const double cnt = static_cast<double>(n.pixels.size());
          n.at = {static_cast<int>(std::lround(sx / cnt)), static_cast<int>(std::lround(sy / cnt))};
        }
        g.nodes.push_back(std::move(n));
      }
    }
  }

  void add_edge(int a, int b, std::vector<Point> path) {
    if (path.front() != g.nodes[a].at) path.insert(path.begin(), g.nodes[a].at);
    if (path.back() != g.nodes[b].at) path.push_back(g.nodes[b].at);
    g.nodes[a].degree += 1;
    g.nodes[b].degree += 1;
    g.edges.push_back({a, b, std::move(path)});
  }

  // Walks a chain of degree-2 pixels starting at `first` entered from `from`.
  void walk(int start_node, Point from, Point first) {
    std::vector<Point> path{from, first};
    visited[idx(first.x, first.y)] = 1;
    Point prev = from;
    Point cur = first;
    while (true) {
      bool advanced = false;
      for (int k = 0; k < 8; ++k) {
        const int nx = cur.x + kDx[k], ny = cur.y + kDy[k];
        if (!linked(s, cur.x, cur.y, k)) continue;
        const Point nb{nx, ny};
        if (nb == prev) continue;
        const int nid = node_of[idx(nx, ny)];
        if (nid >= 0) {
          // Do not step back into the starting pixel's own cluster on the
          // first move; chains always leave the node they start from.
          if (nid == start_node && path.size() == 2 && nb != from) {
            bool adj_from = std::abs(nb.x - from.x) <= 1 && std::abs(nb.y - from.y) <= 1;
            if (adj_from) continue;
          }
          path.push_back(nb);
          node_links.insert(std::minmax(idx(cur.x, cur.y), idx(nx, ny)));
          add_edge(start_node, nid, std::move(path));
          return;
        }
        if (visited[idx(nx, ny)]) continue;
        visited[idx(nx, ny)] = 1;
        path.push_back(nb);
        prev = cur;
        cur = nb;
        advanced = true;
        break;
      }
      if (!advanced) {
        // Dangling chain (should not occur on a thinned skeleton): close it
        // with an End node at the last pixel.
        SkeletonNode n;
        n.kind = NodeKind::End;
        n.at = cur;
        n.pixels = {cur};
        const int id = static_cast<int>(g.nodes.size());
        node_of[idx(cur.x, cur.y)] = id;
        g.nodes.push_back(n);
        add_edge(start_node, id, std::move(path));
        return;
      }
    }
  }

  void trace_edges() {
    const std::size_t initial_nodes = g.nodes.size();
    for (std::size_t n = 0; n < initial_nodes; ++n) {
      const auto pixels = g.nodes[n].pixels;
      for (Point q : pixels) {
        for (int k = 0; k < 8; ++k) {
          const int nx = q.x + kDx[k], ny = q.y + kDy[k];
          if (!linked(s, q.x, q.y, k)) continue;
          const int nid = node_of[idx(nx, ny)];
          if (nid == static_cast<int>(n)) continue;
          if (nid >= 0) {
            auto key = std::minmax(idx(q.x, q.y), idx(nx, ny));
            if (node_links.insert(key).second) add_edge(static_cast<int>(n), nid, {q, {nx, ny}});
            continue;
          }
          if (visited[idx(nx, ny)]) continue;
          walk(static_cast<int>(n), q, {nx, ny});
        }
      }
    }
    // Closed loops with no node pixel.
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (!s.get(x, y) || visited[idx(x, y)] || node_of[idx(x, y)] >= 0) continue;
        SkeletonNode n;
        n.kind = NodeKind::Turn;
        n.at = {x, y};
        n.pixels = {{x, y}};
        const int id = static_cast<int>(g.nodes.size());
        node_of[idx(x, y)] = id;
        visited[idx(x, y)] = 1;
        g.nodes.push_back(n);
        for (int k = 0; k < 8; ++k) {
          const int nx = x + kDx[k], ny = y + kDy[k];
          if (linked(s, x, y, k) && !visited[idx(nx, ny)] && node_of[idx(nx, ny)] < 0) {
            walk(id, {x, y}, {nx, ny});
            break;
          }
        }
      }
    }
  }
};

double turn_angle(const std::vector<Point>& path, std::size_t i, std::size_t k) {
  const double ax = path[i].x - path[i - k].x, ay = path[i].y - path[i - k].y;
  const double bx = path[i + k].x - path[i].x, by = path[i + k].y - path[i].y;
  const double na = std::hypot(ax, ay), nb = std::hypot(bx, by);
  if (na == 0 || nb == 0) return 0;
  const double c = std::clamp((ax * bx + ay * by) / (na * nb), -1.0, 1.0);
  return std::acos(c) * 180.0 / M_PI;
}

// Indices along `path` where the direction turns by more than `tol`.
std::vector<std::size_t> find_turns(const std::vector<Point>& path, double tol) {
  std::vector<std::size_t> out;
  const std::size_t n = path.size();
  std::size_t k = std::min<std::size_t>(5, n >= 1 ? (n - 1) / 2 : 0);
  if (k < 3) return out;
  std::size_t i = k;
  while (i + k < n) {
    if (turn_angle(path, i, k) <= tol) {
      ++i;
      continue;
    }
    std::size_t best = i;
    double best_a = turn_angle(path, i, k);
    std::size_t j = i + 1;
    for (; j + k < n; ++j) {
      const double a = turn_angle(path, j, k);
      if (a <= tol) break;
      if (a > best_a) {
        best_a = a;
        best = j;
      }
    }
    out.push_back(best);
    i = j;
  }
  return out;
}

}  // namespace

BitMask prune_spurs(const BitMask& skeleton, int min_length) {
  BitMask s = skeleton;
  for (int round = 0; round < 8; ++round) {
    GraphBuilder b(s);
    b.find_nodes();
    b.trace_edges();
    bool removed = false;
    for (const auto& e : b.g.edges) {
      const auto& na = b.g.nodes[e.a];
      const auto& nb = b.g.nodes[e.b];
      const bool a_end = na.kind == NodeKind::End && na.degree == 1;
      const bool b_end = nb.kind == NodeKind::End && nb.degree == 1;
      if (a_end == b_end) continue;
      const auto& junction = a_end ? nb : na;
      if (junction.kind != NodeKind::Branch) continue;
      if (static_cast<int>(e.path.size()) - 1 >= min_length) continue;
      std::set<Point> keep(junction.pixels.begin(), junction.pixels.end());
      for (Point q : e.path) {
        if (!keep.contains(q) && s.in_bounds(q.x, q.y)) s.set(q.x, q.y, false);
      }
      removed = true;
    }
    if (!removed) break;
  }
  return s;
}

SkeletonGraph build_skeleton_graph(const BitMask& skeleton, double turn_tolerance_deg) {
  GraphBuilder b(skeleton);
  b.find_nodes();
  b.trace_edges();
  SkeletonGraph g = std::move(b.g);

  // Split edges at turns.
  std::vector<SkeletonEdge> edges;
  for (auto& e : g.edges) {
    const auto turns = find_turns(e.path, turn_tolerance_deg);
    if (turns.empty()) {
      edges.push_back(std::move(e));
      continue;
    }
    int prev_node = e.a;
    std::size_t prev_i = 0;
    // Degrees: the split keeps e.a / e.b degrees unchanged.
    for (std::size_t t : turns) {
      SkeletonNode n;
      n.kind = NodeKind::Turn;
      n.at = e.path[t];
      n.pixels = {e.path[t]};
      n.degree = 2;
      const int id = static_cast<int>(g.nodes.size());
      g.nodes.push_back(n);
      edges.push_back({prev_node, id, {e.path.begin() + static_cast<std::ptrdiff_t>(prev_i),
                                       e.path.begin() + static_cast<std::ptrdiff_t>(t) + 1}});
      prev_node = id;
      prev_i = t;
    }
    edges.push_back({prev_node, e.b, {e.path.begin() + static_cast<std::ptrdiff_t>(prev_i), e.path.end()}});
  }
  g.edges = std::move(edges);
  for (auto& n : g.nodes) {
    if (n.degree >= 3) {
      n.kind = NodeKind::Branch;
    } else if (n.degree == 2) {
      n.kind = NodeKind::Turn;
    } else {
      n.kind = NodeKind::End;
    }
  }
  return g;
}

namespace {

void douglas_peucker(const std::vector<Point>& pts, std::size_t lo, std::size_t hi, double tol,
                     std::vector<std::size_t>& keep) {
  if (hi <= lo + 1) return;
  double best = -1;
  std::size_t best_i = lo;
  for (std::size_t i = lo + 1; i < hi; ++i) {
    const double d = pts[lo] == pts[hi]
                         ? std::hypot(pts[i].x - pts[lo].x, pts[i].y - pts[lo].y)
                         : point_segment_distance(pts[i].x, pts[i].y, pts[lo], pts[hi]);
    if (d > best) {
      best = d;
      best_i = i;
    }
  }
  if (best > tol) {
    douglas_peucker(pts, lo, best_i, tol, keep);
    keep.push_back(best_i);
    douglas_peucker(pts, best_i, hi, tol, keep);
  }
}

}  // namespace

std::vector<Segment> fit_segments(const SkeletonGraph& g, double max_deviation) {
  std::vector<Segment> out;
  for (const auto& e : g.edges) {
    const auto& p = e.path;
    if (p.size() < 2) continue;
    std::vector<std::size_t> keep{0};
    douglas_peucker(p, 0, p.size() - 1, max_deviation, keep);
    keep.push_back(p.size() - 1);
    for (std::size_t i = 1; i < keep.size(); ++i) {
      if (p[keep[i - 1]] != p[keep[i]]) out.emplace_back(p[keep[i - 1]], p[keep[i]]);
    }
  }
  return out;
}

namespace {

struct Poly {
  Point a, b;
  std::vector<Point> interior;  // merged-away vertices, for deviation checks
};

// Moves each End keypoint outward along its edge direction to the last ink
// pixel; thinning eats roughly half a stroke width off every wire end.
void extend_ends(const BitMask& net, const SkeletonGraph& g, std::vector<Poly>& segs, std::vector<Point>& ends) {
  for (const auto& e : g.edges) {
    for (int side = 0; side < 2; ++side) {
      const int nid = side == 0 ? e.a : e.b;
      const auto& node = g.nodes[nid];
      if (node.kind != NodeKind::End || node.degree != 1 || e.path.size() < 2) continue;
      const std::size_t n = e.path.size();
      const std::size_t k = std::min<std::size_t>(5, n - 1);
      const Point tip = side == 0 ? e.path[0] : e.path[n - 1];
      const Point back = side == 0 ? e.path[k] : e.path[n - 1 - k];
      const double dx = tip.x - back.x, dy = tip.y - back.y;
      const double len = std::hypot(dx, dy);
      if (len == 0) continue;
      const double ux = dx / len, uy = dy / len;
      Point last = tip;
      for (int t = 1; t <= 64; ++t) {
        const Point q{static_cast<int>(std::lround(tip.x + ux * t)), static_cast<int>(std::lround(tip.y + uy * t))};
        if (!net.at(q.x, q.y)) break;
        last = q;
      }
      if (last == tip) continue;
      for (auto& s : segs) {
        if (s.a == tip) {
          s.interior.push_back(tip);
          s.a = last;
        } else if (s.b == tip) {
          s.interior.push_back(tip);
          s.b = last;
        }
      }
      for (auto& p : ends) {
        if (p == tip) p = last;
      }
    }
  }
}

bool within(const Poly& s, Point a, Point b, double tol) {
  if (a == b) return false;
  for (Point q : s.interior) {
    if (point_segment_distance(q.x, q.y, a, b) > tol) return false;
  }
  return true;
}

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) i = parent[i] = parent[parent[i]];
  return i;
}

// Joins separate pieces of one net (e.g. a stroke cut in two at a crossing)
// by their closest End points, then folds collinear joints away.
void bridge_pieces(std::vector<Poly>& segs, std::vector<Point>& ends, double gap, double tol) {
  if (segs.size() < 2) return;
  std::map<Point, int> vid;
  auto vertex = [&](Point p) {
    auto [it, ins] = vid.try_emplace(p, static_cast<int>(vid.size()));
    return it->second;
  };
  for (const auto& s : segs) {
    vertex(s.a);
    vertex(s.b);
  }
  std::vector<int> parent(vid.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& s : segs) parent[find_root(parent, vid[s.a])] = find_root(parent, vid[s.b]);

  std::set<Point> joints;
  while (true) {
    double best = gap;
    int bi = -1, bj = -1;
    for (std::size_t i = 0; i < ends.size(); ++i) {
      if (!vid.contains(ends[i])) continue;
      for (std::size_t j = i + 1; j < ends.size(); ++j) {
        if (!vid.contains(ends[j])) continue;
        if (find_root(parent, vid[ends[i]]) == find_root(parent, vid[ends[j]])) continue;
        const double d = std::hypot(ends[i].x - ends[j].x, ends[i].y - ends[j].y);
        if (d <= best) {
          if (d < best || bi < 0) {
            best = d;
            bi = static_cast<int>(i);
            bj = static_cast<int>(j);
          }
        }
      }
    }
    if (bi < 0) break;
    const Point p = ends[bi], q = ends[bj];
    parent[find_root(parent, vid[p])] = find_root(parent, vid[q]);
    if (p != q) segs.push_back({p, q, {}});
    joints.insert(p);
    joints.insert(q);
    ends.erase(ends.begin() + bj);
    ends.erase(ends.begin() + bi);
  }

  // Fold degree-2 joints whose neighbours stay collinear.
  bool merged = true;
  while (merged) {
    merged = false;
    for (Point j : joints) {
      std::vector<std::size_t> inc;
      for (std::size_t i = 0; i < segs.size(); ++i) {
        if (segs[i].a == j || segs[i].b == j) inc.push_back(i);
      }
      if (inc.size() != 2) continue;
      Poly& s1 = segs[inc[0]];
      Poly& s2 = segs[inc[1]];
      const Point a = s1.a == j ? s1.b : s1.a;
      const Point b = s2.a == j ? s2.b : s2.a;
      Poly m{a, b, s1.interior};
      m.interior.insert(m.interior.end(), s2.interior.begin(), s2.interior.end());
      m.interior.push_back(j);
      if (!within(m, a, b, tol)) continue;
      segs[inc[0]] = m;
      segs.erase(segs.begin() + static_cast<std::ptrdiff_t>(inc[1]));
      joints.erase(j);
      merged = true;
      break;
    }
  }
}

NetGeometry vectorize_one(const BitMask& net, Point origin, int label, std::size_t pixel_count,
                          const VectorizeOptions& o) {
  NetGeometry out;
  out.label = label;
  out.pixel_count = pixel_count;
  BitMask skel = prune_spurs(skeletonize(net, Exec::Serial), o.spur_length);
  const SkeletonGraph g = build_skeleton_graph(skel, o.turn_tolerance_deg);
  std::vector<Poly> segs;
  for (const auto& s : fit_segments(g, o.max_deviation)) segs.push_back({s.a(), s.b(), {}});
  std::vector<Point> ends;
  for (const auto& n : g.nodes) {
    if (n.kind == NodeKind::End && n.degree == 1) ends.push_back(n.at);
  }
  extend_ends(net, g, segs, ends);
  bridge_pieces(segs, ends, o.bridge_gap, o.max_deviation);

  const Point off{origin.x, origin.y};
  auto shift = [&](Point p) { return Point{p.x + off.x, p.y + off.y}; };
  for (const auto& s : segs) {
    if (s.a != s.b) out.segments.emplace_back(shift(s.a), shift(s.b));
  }
  for (Point p : ends) out.ends.push_back(shift(p));
  for (const auto& n : g.nodes) {
    if (n.kind == NodeKind::Branch) out.branches.push_back(shift(n.at));
    if (n.kind == NodeKind::Turn && n.degree == 2) out.turns.push_back(shift(n.at));
  }
  // Turn/branch keypoints that were folded away are no longer segment ends.
  auto on_endpoint = [&](Point p) {
    return std::any_of(out.segments.begin(), out.segments.end(),
                       [&](const Segment& s) { return s.a() == p || s.b() == p; });
  };
  std::erase_if(out.turns, [&](Point p) { return !on_endpoint(p); });
  std::erase_if(out.branches, [&](Point p) { return !on_endpoint(p); });
  std::erase_if(out.ends, [&](Point p) { return !on_endpoint(p); });

  if (out.segments.empty()) {
    // Too small to thin into a path: span first to last pixel.
    Point first{-1, -1}, last{-1, -1};
    for (int y = 0; y < net.height(); ++y) {
      for (int x = 0; x < net.width(); ++x) {
        if (!net.get(x, y)) continue;
        if (first.x < 0) first = {x, y};
        last = {x, y};
      }
    }
    if (first.x >= 0) {
      out.anchor = shift(first);
      if (first != last) {
        out.segments.emplace_back(shift(first), shift(last));
        out.ends = {shift(first), shift(last)};
      } else {
        out.ends = {shift(first)};
      }
    }
  }
  return out;
}

}  // namespace

std::vector<NetGeometry> vectorize_nets(const LabelMap& lmap, const VectorizeOptions& opts) {
  const int k = lmap.label_count() > 0 ? lmap.label_count()
                                        : *std::max_element(lmap.data().begin(), lmap.data().end());
  struct Box {
    int x0 = std::numeric_limits<int>::max(), y0 = std::numeric_limits<int>::max();
    int x1 = -1, y1 = -1;
    std::size_t count = 0;
  };
  std::vector<Box> boxes(static_cast<std::size_t>(std::max(k, 0)) + 1);
  for (int y = 0; y < lmap.height(); ++y) {
    for (int x = 0; x < lmap.width(); ++x) {
      const int l = lmap.get(x, y);
      if (l <= 0 || l > k) continue;
      auto& b = boxes[l];
      b.x0 = std::min(b.x0, x);
      b.y0 = std::min(b.y0, y);
      b.x1 = std::max(b.x1, x);
      b.y1 = std::max(b.y1, y);
      ++b.count;
    }
  }
  std::vector<NetGeometry> out(static_cast<std::size_t>(std::max(k, 0)));
  auto work = [&](int l) {
    const auto& b = boxes[l];
    if (b.count == 0) {
      out[l - 1].label = l;
      return;
    }
    BitMask crop(b.x1 - b.x0 + 1, b.y1 - b.y0 + 1);
    for (int y = b.y0; y <= b.y1; ++y) {
      for (int x = b.x0; x <= b.x1; ++x) {
        if (lmap.get(x, y) == l) crop.set(x - b.x0, y - b.y0);
      }
    }
    out[l - 1] = vectorize_one(crop, {b.x0, b.y0}, l, b.count, opts);
  };
  if (opts.exec == Exec::Serial) {
    for (int l = 1; l <= k; ++l) work(l);
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (int l = 1; l <= k; ++l) work(l);
  }
  return out;
}

}  // namespace netlift
