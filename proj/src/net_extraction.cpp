#include "netlift/net_extraction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "netlift/error.hpp"
#include "netlift/vectorize.hpp"

namespace netlift {

namespace {

constexpr int kDx[8] = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr int kDy[8] = {-1, -1, 0, 1, 1, 1, 0, -1};

// Stubs may need a wider disk than the base radius before two shallow
// strokes separate; the search stops at this multiple.
constexpr int kMaxRadiusFactor = 4;

inline long sq(long v) { return v * v; }

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) i = parent[i] = parent[parent[i]];
  return i;
}

std::vector<Stub> find_stubs(const LabelMap& lm, Point at, int r, const std::set<int>& labels) {
  const int outer = r + 2;
  const long r2 = sq(r), o2 = sq(outer);
  const int x0 = std::max(0, at.x - outer), x1 = std::min(lm.width() - 1, at.x + outer);
  const int y0 = std::max(0, at.y - outer), y1 = std::min(lm.height() - 1, at.y + outer);
  auto in_ring = [&](int x, int y) {
    if (!lm.in_bounds(x, y)) return false;
    const long d2 = sq(x - at.x) + sq(y - at.y);
    return d2 > r2 && d2 <= o2 && labels.contains(lm.get(x, y));
  };
  const int bw = x1 - x0 + 1;
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(std::max(0, bw)) * std::max(0, y1 - y0 + 1), 0);
  std::vector<Stub> out;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (!in_ring(x, y) || seen[(y - y0) * bw + (x - x0)]) continue;
      std::vector<Point> stack{{x, y}};
      seen[(y - y0) * bw + (x - x0)] = 1;
      double sx = 0, sy = 0;
      std::size_t n = 0;
      while (!stack.empty()) {
        const Point p = stack.back();
        stack.pop_back();
        sx += p.x;
        sy += p.y;
        ++n;
        for (int k = 0; k < 8; ++k) {
          const int nx = p.x + kDx[k], ny = p.y + kDy[k];
          if (nx < x0 || nx > x1 || ny < y0 || ny > y1) continue;
          if (seen[(ny - y0) * bw + (nx - x0)] || !in_ring(nx, ny)) continue;
          seen[(ny - y0) * bw + (nx - x0)] = 1;
          stack.push_back({nx, ny});
        }
      }
      Stub s;
      s.cx = sx / static_cast<double>(n);
      s.cy = sy / static_cast<double>(n);
      s.contact = {static_cast<int>(std::lround(s.cx)), static_cast<int>(std::lround(s.cy))};
      double a = std::atan2(s.cy - at.y, s.cx - at.x);
      if (a < 0) a += 2 * M_PI;
      s.angle = a;
      s.label_before = lm.get(x, y);
      out.push_back(s);
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Stub& a, const Stub& b) { return a.angle < b.angle; });
  return out;
}

// True when the stubs lie in distinct pieces of the ink just outside the
// disk. Two shallow strokes can leave separate annulus groups that still
// touch a few pixels further out; such a radius is too small. Pixels near
// the other crossings are left out so a neighbour cannot join two stubs.
bool stubs_separate(const LabelMap& lm, Point at, int r, int reach, const std::set<int>& labels,
                    const std::vector<Stub>& stubs, std::span<const CrossPoint> others, int other_r) {
  const int outer = r + reach;
  const long r2 = sq(r), o2 = sq(outer);
  const int x0 = at.x - outer, y0 = at.y - outer, bw = 2 * outer + 1;
  std::vector<Point> near;
  for (const auto& c : others) {
    if (c.at != at && sq(c.at.x - at.x) + sq(c.at.y - at.y) <= sq(outer + other_r)) near.push_back(c.at);
  }
  // 0 = outside, -1 = candidate ink, > 0 = component id
  std::vector<int> comp(static_cast<std::size_t>(bw) * bw, 0);
  auto slot = [&](int x, int y) -> int& { return comp[static_cast<std::size_t>(y - y0) * bw + (x - x0)]; };
  for (int y = y0; y < y0 + bw; ++y) {
    for (int x = x0; x < x0 + bw; ++x) {
      if (!lm.in_bounds(x, y)) continue;
      const long d2 = sq(x - at.x) + sq(y - at.y);
      if (d2 <= r2 || d2 > o2 || !labels.contains(lm.get(x, y))) continue;
      bool blocked = false;
      for (const Point c : near) blocked = blocked || sq(x - c.x) + sq(y - c.y) <= sq(other_r);
      if (!blocked) slot(x, y) = -1;
    }
  }
  auto inside = [&](int x, int y) {
    return x >= x0 && y >= y0 && x < x0 + bw && y < y0 + bw && slot(x, y) != 0;
  };
  int next = 0;
  for (int y = y0; y < y0 + bw; ++y) {
    for (int x = x0; x < x0 + bw; ++x) {
      if (slot(x, y) != -1) continue;
      slot(x, y) = ++next;
      std::vector<Point> stack{{x, y}};
      while (!stack.empty()) {
        const Point p = stack.back();
        stack.pop_back();
        for (int k = 0; k < 8; ++k) {
          const int nx = p.x + kDx[k], ny = p.y + kDy[k];
          if (!inside(nx, ny) || slot(nx, ny) != -1) continue;
          slot(nx, ny) = next;
          stack.push_back({nx, ny});
        }
      }
    }
  }
  std::set<int> seen;
  for (const auto& st : stubs) {
    int best = 0;
    long bd = sq(3) + 1;
    for (int y = st.contact.y - 3; y <= st.contact.y + 3; ++y) {
      for (int x = st.contact.x - 3; x <= st.contact.x + 3; ++x) {
        const long d = sq(x - st.contact.x) + sq(y - st.contact.y);
        if (d < bd && inside(x, y)) {
          bd = d;
          best = slot(x, y);
        }
      }
    }
    if (best == 0 || !seen.insert(best).second) return false;
  }
  return true;
}

}  // namespace

LabelMap connected_components(const BitMask& mask) {
  LabelMap lm(mask.width(), mask.height());
  int next = 0;
  std::vector<Point> stack;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.get(x, y) || lm.get(x, y) != 0) continue;
      ++next;
      lm.set(x, y, next);
      stack.push_back({x, y});
      while (!stack.empty()) {
        const Point p = stack.back();
        stack.pop_back();
        for (int k = 0; k < 8; ++k) {
          const int nx = p.x + kDx[k], ny = p.y + kDy[k];
          if (!mask.at(nx, ny) || lm.get(nx, ny) != 0) continue;
          lm.set(nx, ny, next);
          stack.push_back({nx, ny});
        }
      }
    }
  }
  lm.set_label_count(next);
  return lm;
}

int estimate_stroke(const BitMask& mask) {
  const int w = mask.width(), h = mask.height();
  std::vector<int> hrun(static_cast<std::size_t>(w) * h, 0);
  for (int y = 0; y < h; ++y) {
    int x = 0;
    while (x < w) {
      if (!mask.get(x, y)) {
        ++x;
        continue;
      }
      int e = x;
      while (e < w && mask.get(e, y)) ++e;
      for (int i = x; i < e; ++i) hrun[static_cast<std::size_t>(y) * w + i] = e - x;
      x = e;
    }
  }
  std::vector<int> mins;
  for (int x = 0; x < w; ++x) {
    int y = 0;
    while (y < h) {
      if (!mask.get(x, y)) {
        ++y;
        continue;
      }
      int e = y;
      while (e < h && mask.get(x, e)) ++e;
      for (int i = y; i < e; ++i) mins.push_back(std::min(e - y, hrun[static_cast<std::size_t>(i) * w + x]));
      y = e;
    }
  }
  if (mins.empty()) return 1;
  const auto mid = mins.begin() + static_cast<std::ptrdiff_t>((mins.size() - 1) / 2);
  std::nth_element(mins.begin(), mid, mins.end());
  return std::max(1, *mid);
}

ResolveResult resolve_crossings(const LabelMap& lmap, std::span<const CrossPoint> crossings, int stroke) {
  ResolveResult out;
  const int w = lmap.width(), h = lmap.height();
  const int r0 = crossing_radius(stroke);

  // Radius and stubs per crossing, all read from the unsplit labels.
  struct Plan {
    std::set<int> labels;
    bool split = false;
  };
  std::vector<Plan> plans;
  for (const auto& cp : crossings) {
    if (cp.kind != CrossKind::Crossing) continue;
    const Point at = cp.at;
    Plan plan;
    for (int y = at.y - r0; y <= at.y + r0; ++y) {
      for (int x = at.x - r0; x <= at.x + r0; ++x) {
        if (sq(x - at.x) + sq(y - at.y) > sq(r0)) continue;
        if (const int l = lmap.at(x, y); l != 0) plan.labels.insert(l);
      }
    }
    if (plan.labels.empty()) {
      throw ValidationError("crossing at (" + std::to_string(at.x) + "," + std::to_string(at.y) +
                            ") has no wire pixel within radius " + std::to_string(r0));
    }
    CrossingResolution res;
    res.at = at;
    for (int r = r0; r <= kMaxRadiusFactor * r0 && !plan.split; ++r) {
      auto stubs = find_stubs(lmap, at, r, plan.labels);
      if (stubs.size() >= 4 && stubs.size() % 2 == 0 && stubs_separate(lmap, at, r, 3 * r0, plan.labels, stubs, crossings, r0)) {
        res.radius = r;
        res.stubs = std::move(stubs);
        plan.split = true;
      }
    }
    if (!plan.split) {
      res.radius = r0;
      res.stubs = find_stubs(lmap, at, r0, plan.labels);
      res.degraded = true;
      res.note = std::to_string(res.stubs.size()) + " stubs; left merged";
    }
    out.resolutions.push_back(std::move(res));
    plans.push_back(std::move(plan));
  }

  // Every disk is cleared at once so that a wire running through several
  // crossings is split at each of them. disk_of[] names the first crossing
  // whose disk holds the pixel.
  std::vector<int> disk_of(static_cast<std::size_t>(w) * h, -1);
  for (std::size_t c = 0; c < plans.size(); ++c) {
    const auto& res = out.resolutions[c];
    const Point at = res.at;
    const int r = res.radius;
    for (int y = std::max(0, at.y - r); y <= std::min(h - 1, at.y + r); ++y) {
      for (int x = std::max(0, at.x - r); x <= std::min(w - 1, at.x + r); ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        if (disk_of[i] < 0 && sq(x - at.x) + sq(y - at.y) <= sq(r) && plans[c].labels.contains(lmap.get(x, y))) {
          disk_of[i] = static_cast<int>(c);
        }
      }
    }
  }
  BitMask rest(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (lmap.get(x, y) != 0 && disk_of[static_cast<std::size_t>(y) * w + x] < 0) rest.set(x, y);
    }
  }
  const LabelMap pieces = connected_components(rest);
  const int npieces = pieces.label_count();
  std::vector<int> parent(npieces + 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto unite = [&](int a, int b) {
    if (a > 0 && b > 0) parent[find_root(parent, a)] = find_root(parent, b);
  };

  // Piece holding stub s of crossing c: the non-disk pixel nearest the
  // stub centroid within a few pixels of its contact.
  auto stub_piece = [&](const Stub& st, const Plan& plan) {
    int best_piece = 0;
    double best = 1e18;
    for (int dy = -3; dy <= 3; ++dy) {
      for (int dx = -3; dx <= 3; ++dx) {
        const int x = st.contact.x + dx, y = st.contact.y + dy;
        if (!pieces.in_bounds(x, y) || pieces.get(x, y) == 0 || !plan.labels.contains(lmap.get(x, y))) continue;
        const double d = std::hypot(x - st.cx, y - st.cy);
        if (d < best) {
          best = d;
          best_piece = pieces.get(x, y);
        }
      }
    }
    return best_piece;
  };

  std::vector<std::vector<int>> stub_pieces(plans.size());
  for (std::size_t c = 0; c < plans.size(); ++c) {
    auto& res = out.resolutions[c];
    auto& sp = stub_pieces[c];
    for (const auto& st : res.stubs) sp.push_back(stub_piece(st, plans[c]));
    if (plans[c].split && std::find(sp.begin(), sp.end(), 0) != sp.end()) {
      plans[c].split = false;
      res.degraded = true;
      res.note = "stub seed not found; left merged";
    }
    if (plans[c].split) {
      const int n = static_cast<int>(sp.size());
      for (int i = 0; i < n / 2; ++i) {
        res.pairing.emplace_back(i, i + n / 2);
        unite(sp[i], sp[i + n / 2]);
      }
    }
  }
  // A degraded crossing keeps everything around it as one net.
  for (std::size_t c = 0; c < plans.size(); ++c) {
    if (plans[c].split) continue;
    int anchor = 0;
    for (int p : stub_pieces[c]) {
      if (p == 0) continue;
      if (anchor == 0) anchor = p;
      unite(p, anchor);
    }
    const auto& res = out.resolutions[c];
    for (int y = std::max(0, res.at.y - res.radius - 1); y <= std::min(h - 1, res.at.y + res.radius + 1); ++y) {
      for (int x = std::max(0, res.at.x - res.radius - 1); x <= std::min(w - 1, res.at.x + res.radius + 1); ++x) {
        if (disk_of[static_cast<std::size_t>(y) * w + x] != static_cast<int>(c)) continue;
        for (int k = 0; k < 8; ++k) {
          const int p = pieces.at(x + kDx[k], y + kDy[k]);
          if (p == 0) continue;
          if (anchor == 0) anchor = p;
          unite(p, anchor);
        }
      }
    }
  }

  out.labels = LabelMap(w, h);
  LabelMap& lm = out.labels;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (const int p = pieces.get(x, y); p != 0) lm.set(x, y, find_root(parent, p));
    }
  }
  // Disk pixels: nearest pair chord, or the merged net of a degraded
  // crossing. Isolated disk blobs get labels past every piece.
  int spare = npieces;
  std::vector<int> lone_label(plans.size(), 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int c = disk_of[static_cast<std::size_t>(y) * w + x];
      if (c < 0) continue;
      const auto& res = out.resolutions[c];
      const auto& sp = stub_pieces[c];
      int label = 0;
      if (plans[c].split) {
        double best = 1e18;
        for (auto [i, j] : res.pairing) {
          const auto& a = res.stubs[i];
          const auto& b = res.stubs[j];
          const double vx = b.cx - a.cx, vy = b.cy - a.cy;
          const double len2 = vx * vx + vy * vy;
          double t = len2 > 0 ? ((x - a.cx) * vx + (y - a.cy) * vy) / len2 : 0.0;
          t = std::clamp(t, 0.0, 1.0);
          const double d = std::hypot(x - (a.cx + t * vx), y - (a.cy + t * vy));
          const int l = find_root(parent, sp[i]);
          if (d < best - 1e-9 || (std::abs(d - best) <= 1e-9 && l < label)) {
            best = d;
            label = l;
          }
        }
      } else {
        for (int p : sp) {
          if (p != 0) {
            label = find_root(parent, p);
            break;
          }
        }
        for (int k = 0; k < 8 && label == 0; ++k) {
          if (const int p = pieces.at(x + kDx[k], y + kDy[k]); p != 0) label = find_root(parent, p);
        }
        if (label == 0) {
          if (lone_label[c] == 0) lone_label[c] = ++spare;
          label = lone_label[c];
        }
      }
      lm.set(x, y, label);
    }
  }
  lm.densify();
  return out;
}

std::vector<CrossPoint> infer_crosspoints(const BitMask& mask, const BitMask& skeleton) {
  std::vector<CrossPoint> out;
  const SkeletonGraph g = build_skeleton_graph(skeleton);
  const int stroke = estimate_stroke(mask);
  const double r = 1.5 * stroke;
  const int ri = static_cast<int>(std::ceil(r));
  for (const auto& n : g.nodes) {
    if (n.kind != NodeKind::Branch || n.degree < 4) continue;
    int inside = 0, ink = 0;
    for (int dy = -ri; dy <= ri; ++dy) {
      for (int dx = -ri; dx <= ri; ++dx) {
        if (dx * dx + dy * dy > r * r) continue;
        ++inside;
        ink += mask.at(n.at.x + dx, n.at.y + dy) ? 1 : 0;
      }
    }
    const double ratio = inside > 0 ? static_cast<double>(ink) / inside : 0.0;
    out.push_back({n.at, ratio > 0.75 ? CrossKind::Junction : CrossKind::Crossing});
  }
  std::sort(out.begin(), out.end(), [](const CrossPoint& a, const CrossPoint& b) { return a.at < b.at; });
  return out;
}

}  // namespace netlift
