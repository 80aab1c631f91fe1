#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "netlift/geometry.hpp"
#include "netlift/netlist.hpp"
#include "netlift/pin_table.hpp"
#include "netlift/schematic.hpp"

namespace testutil {

using namespace netlift;

// Sampling helpers over mt19937_64 so fixtures are identical on every
// standard library.
struct Rng {
  std::mt19937_64 e;
  explicit Rng(std::uint64_t seed) : e(seed) {}
  int uniform(int lo, int hi) { return lo + static_cast<int>(e() % static_cast<std::uint64_t>(hi - lo + 1)); }
  double real() { return static_cast<double>(e() >> 11) * 0x1.0p-53; }
  double real(double lo, double hi) { return lo + (hi - lo) * real(); }
};

inline const std::vector<ElementType>& component_types() {
  static const std::vector<ElementType> t = {ElementType::NMOS,     ElementType::PMOS,  ElementType::Resistor,
                                             ElementType::Capacitor, ElementType::Inductor, ElementType::Diode,
                                             ElementType::VSource,  ElementType::ISource, ElementType::OpAmp};
  return t;
}

inline std::string prefix_of(ElementType t) {
  switch (t) {
    case ElementType::NMOS:
    case ElementType::PMOS: return "M";
    case ElementType::Resistor: return "R";
    case ElementType::Capacitor: return "C";
    case ElementType::Inductor: return "L";
    case ElementType::Diode: return "D";
    case ElementType::VSource: return "V";
    case ElementType::ISource: return "I";
    default: return "X";
  }
}

// Canonical random netlist over at most `max_nets` distinct net names.
inline Netlist random_netlist(Rng& rng, int max_nets, int min_comps, int max_comps) {
  static const std::vector<std::string> pool = {"0", "VDD", "net1", "net2", "net3", "net4", "net5", "a", "b", "OUT"};
  std::vector<std::string> names(pool.begin(), pool.end());
  for (std::size_t i = names.size(); i > 1; --i) std::swap(names[i - 1], names[rng.uniform(0, static_cast<int>(i) - 1)]);
  names.resize(static_cast<std::size_t>(std::max(1, rng.uniform(1, max_nets))));
  Netlist n;
  std::map<std::string, int> ordinal;
  const int count = rng.uniform(min_comps, max_comps);
  for (int i = 0; i < count; ++i) {
    Component c;
    c.etype = component_types()[rng.uniform(0, static_cast<int>(component_types().size()) - 1)];
    const std::string p = prefix_of(c.etype);
    c.name = p + std::to_string(++ordinal[p]);
    const std::size_t pins = PinTable::builtin().pin_count(c.etype);
    for (std::size_t k = 0; k < pins; ++k) c.pins.push_back(names[rng.uniform(0, static_cast<int>(names.size()) - 1)]);
    n.components.push_back(std::move(c));
  }
  canonicalize(n);
  return n;
}

// Same circuit under a random bijection of fresh net names.
inline Netlist rename_nets(const Netlist& n, Rng& rng) {
  std::vector<std::string> names(n.nets.begin(), n.nets.end());
  std::vector<std::string> fresh;
  for (std::size_t i = 0; i < names.size(); ++i) fresh.push_back("z" + std::to_string(i));
  for (std::size_t i = fresh.size(); i > 1; --i) std::swap(fresh[i - 1], fresh[rng.uniform(0, static_cast<int>(i) - 1)]);
  std::map<std::string, std::string> m;
  for (std::size_t i = 0; i < names.size(); ++i) m[names[i]] = fresh[i];
  Netlist out;
  for (const auto& c : n.components) {
    Component x = c;
    for (auto& p : x.pins) p = m.at(p);
    out.components.push_back(x);
  }
  canonicalize(out);
  return out;
}

// Exhaustive best TP over every net bijection and every component
// bijection (both sides padded with dummies), scored directly on arrays.
inline long brute_force_tp(const Netlist& gt, const Netlist& pred) {
  std::vector<std::string> gn(gt.nets.begin(), gt.nets.end()), pn(pred.nets.begin(), pred.nets.end());
  const int n = static_cast<int>(std::max(gn.size(), pn.size()));
  const int m = static_cast<int>(std::max(gt.components.size(), pred.components.size()));
  auto index = [](const std::vector<std::string>& names, const std::string& s) {
    return static_cast<int>(std::find(names.begin(), names.end(), s) - names.begin());
  };
  struct C {
    int type = -1;
    std::vector<int> pins;
  };
  auto convert = [&](const Netlist& nl, const std::vector<std::string>& names, int pad) {
    std::vector<C> out;
    for (const auto& c : nl.components) {
      C x;
      x.type = static_cast<int>(c.etype);
      for (const auto& p : c.pins) x.pins.push_back(index(names, p));
      out.push_back(std::move(x));
    }
    out.resize(static_cast<std::size_t>(pad));
    return out;
  };
  const auto gc = convert(gt, gn, m), pc = convert(pred, pn, m);
  std::vector<int> net_perm(n), comp_perm(m);
  std::iota(net_perm.begin(), net_perm.end(), 0);
  long best = 0;
  do {
    std::iota(comp_perm.begin(), comp_perm.end(), 0);
    do {
      long tp = 0;
      for (int i = 0; i < m; ++i) {
        const C& a = gc[i];
        const C& b = pc[comp_perm[i]];
        if (a.type < 0 || b.type < 0) continue;
        tp += a.type == b.type;
        const std::size_t common = std::min(a.pins.size(), b.pins.size());
        for (std::size_t k = 0; k < common; ++k) {
          const int mapped = net_perm[a.pins[k]];
          tp += mapped < static_cast<int>(pn.size()) && mapped == b.pins[k];
        }
      }
      best = std::max(best, tp);
    } while (std::next_permutation(comp_perm.begin(), comp_perm.end()));
  } while (std::next_permutation(net_perm.begin(), net_perm.end()));
  return best;
}

inline long item_count(const Netlist& n) {
  long items = 0;
  for (const auto& c : n.components) items += 1 + static_cast<long>(c.pins.size());
  return items;
}

inline double f1_of(long tp, long g, long p) {
  if (g == 0 && p == 0) return 1.0;
  if (tp == 0) return 0.0;
  return 2.0 * tp / static_cast<double>(g + p);
}

// Pixels within width/2 of the segment (x0,y0)-(x1,y1).
inline void draw_stroke(BitMask& m, double x0, double y0, double x1, double y1, double width) {
  const double r = width / 2.0;
  const int bx0 = std::max(0, static_cast<int>(std::floor(std::min(x0, x1) - r - 1)));
  const int bx1 = std::min(m.width() - 1, static_cast<int>(std::ceil(std::max(x0, x1) + r + 1)));
  const int by0 = std::max(0, static_cast<int>(std::floor(std::min(y0, y1) - r - 1)));
  const int by1 = std::min(m.height() - 1, static_cast<int>(std::ceil(std::max(y0, y1) + r + 1)));
  const double vx = x1 - x0, vy = y1 - y0, len2 = vx * vx + vy * vy;
  for (int y = by0; y <= by1; ++y) {
    for (int x = bx0; x <= bx1; ++x) {
      double t = len2 > 0 ? ((x - x0) * vx + (y - y0) * vy) / len2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      const double dx = x - (x0 + t * vx), dy = y - (y0 + t * vy);
      if (dx * dx + dy * dy <= r * r) m.set(x, y);
    }
  }
}

// Two straight strokes crossing at a random centre.
struct XFixture {
  BitMask mask;
  BitMask a, b;  // per-stroke pixel sets; they overlap near the centre
  Point center;
  int stroke = 0;
  double separation_deg = 0;
};

inline XFixture random_x(Rng& rng, int min_sep_deg = 20) {
  XFixture f;
  const int size = 200;
  f.stroke = rng.uniform(2, 5);
  f.center = {rng.uniform(90, 110), rng.uniform(90, 110)};
  const double a1 = rng.real(0, M_PI);
  f.separation_deg = rng.real(min_sep_deg, 180 - min_sep_deg);
  const double a2 = a1 + f.separation_deg * M_PI / 180.0;
  const double arm = 70;
  f.mask = BitMask(size, size);
  f.a = BitMask(size, size);
  f.b = BitMask(size, size);
  for (auto [ang, m] : {std::pair{a1, &f.a}, std::pair{a2, &f.b}}) {
    draw_stroke(*m, f.center.x - arm * std::cos(ang), f.center.y - arm * std::sin(ang), f.center.x + arm * std::cos(ang),
                f.center.y + arm * std::sin(ang), f.stroke);
  }
  for (std::size_t i = 0; i < f.mask.data().size(); ++i) f.mask.data()[i] = f.a.data()[i] | f.b.data()[i];
  return f;
}

// Union of random strokes, for skeleton properties.
inline BitMask random_stroke_mask(Rng& rng, int w = 64, int h = 64) {
  BitMask m(w, h);
  const int strokes = rng.uniform(1, 5);
  for (int i = 0; i < strokes; ++i) {
    const double width = rng.real(1.0, 6.0);
    if (rng.uniform(0, 2) == 0) {
      // axis-aligned, like schematic wires
      const int y = rng.uniform(0, h - 1), x0 = rng.uniform(0, w - 1), x1 = rng.uniform(0, w - 1);
      if (rng.uniform(0, 1)) {
        draw_stroke(m, x0, y, x1, y, width);
      } else {
        draw_stroke(m, y * w / h, x0 * h / w, y * w / h, x1 * h / w, width);
      }
    } else {
      draw_stroke(m, rng.real(0, w - 1), rng.real(0, h - 1), rng.real(0, w - 1), rng.real(0, h - 1), width);
    }
  }
  return m;
}

inline int component_count(const BitMask& m) {
  const int w = m.width(), h = m.height();
  std::vector<int> seen(static_cast<std::size_t>(w) * h, 0);
  int count = 0;
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!m.get(x, y) || seen[y * w + x]) continue;
      ++count;
      seen[y * w + x] = 1;
      stack.push_back({x, y});
      while (!stack.empty()) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = cx + dx, ny = cy + dy;
            if (m.at(nx, ny) && !seen[ny * w + nx]) {
              seen[ny * w + nx] = 1;
              stack.push_back({nx, ny});
            }
          }
        }
      }
    }
  }
  return count;
}

// Structurally valid document: unique ids and net names, bindings resolve.
inline SchematicDoc random_schematic(Rng& rng) {
  SchematicDoc d;
  d.canvas = {rng.uniform(100, 500), rng.uniform(100, 500)};
  const int ne = rng.uniform(0, 5);
  for (int i = 0; i < ne; ++i) {
    ElementDetection e;
    e.id = "E" + std::to_string(i + 1);
    e.etype = kAllElementTypes[rng.uniform(0, 11)];
    const int x = rng.uniform(0, 50), y = rng.uniform(0, 50);
    e.bbox = BBox(x, y, x + rng.uniform(0, 40), y + rng.uniform(0, 40));
    e.rotation = {angle_from_degrees(90 * rng.uniform(0, 3)), rng.uniform(0, 1) == 1};
    d.elements.push_back(e);
  }
  const int nn = rng.uniform(0, 4);
  for (int i = 0; i < nn; ++i) {
    SchematicNet n;
    n.name = "n" + std::to_string(i);
    for (int k = rng.uniform(0, 3); k > 0; --k) {
      const Point a{rng.uniform(0, 99), rng.uniform(0, 99)};
      n.segments.emplace_back(a, Point{a.x + 1 + rng.uniform(0, 20), a.y});
    }
    d.nets.push_back(n);
  }
  if (ne > 0 && nn > 0) {
    for (int k = rng.uniform(0, 4); k > 0; --k) {
      d.bindings.push_back({"E" + std::to_string(rng.uniform(1, ne)), "p", "n" + std::to_string(rng.uniform(0, nn - 1))});
    }
  }
  return d;
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("netlift_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace testutil
