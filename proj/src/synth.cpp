#include "netlift/synth.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdio>
#include <limits>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <span>

#include <omp.h>

#include <nlohmann/json.hpp>

#include "file_util.hpp"
#include "netlift/error.hpp"
#include "netlift/glyphs.hpp"
#include "netlift/pin_table.hpp"
#include "netlift/spectre.hpp"

namespace netlift {

std::string_view to_string(Difficulty d) {
  switch (d) {
    case Difficulty::Easy: return "easy";
    case Difficulty::Medium: return "medium";
    case Difficulty::Hard: return "hard";
  }
  return "easy";
}

Difficulty difficulty_from_string(std::string_view s) {
  if (s == "easy") return Difficulty::Easy;
  if (s == "medium") return Difficulty::Medium;
  if (s == "hard") return Difficulty::Hard;
  throw FormatError("unknown difficulty '" + std::string(s) + "' (expected easy, medium or hard)");
}

SynthConfig SynthConfig::preset(Difficulty d, std::uint64_t seed, bool markings) {
  SynthConfig c;
  c.seed = seed;
  c.difficulty = d;
  c.markings = markings;
  switch (d) {
    case Difficulty::Easy:
      c.min_elements = 3;
      c.max_elements = 8;
      c.canvas = {640, 640};
      break;
    case Difficulty::Medium:
      c.min_elements = 9;
      c.max_elements = 15;
      c.canvas = {896, 896};
      break;
    case Difficulty::Hard:
      c.min_elements = 16;
      c.max_elements = 25;
      c.canvas = {1024, 1024};
      break;
  }
  return c;
}

namespace {

constexpr int kPitch = 10;       // routing grid spacing
constexpr int kPlaceGrid = 40;   // element box corners snap to this
constexpr int kBoxGap = 40;      // minimum free space between element boxes
constexpr int kEdgeMargin = 40;  // element boxes keep this far from the canvas edge
constexpr int kAttempts = 60;
constexpr std::uint8_t kInk = 0;

// mt19937_64 is specified bit-exactly; the std distributions are not, so
// sampling goes through these helpers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : e_(seed) {}
  std::uint64_t next() { return e_(); }
  int uniform(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(next() % span);
  }
  double real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return real() < p; }

 private:
  std::mt19937_64 e_;
};

constexpr std::array<int, 4> kDirX = {0, 1, 0, -1};  // N E S W
constexpr std::array<int, 4> kDirY = {-1, 0, 1, 0};
inline int opposite(int d) { return (d + 2) % 4; }

Size unrotated_size(ElementType t) {
  switch (t) {
    case ElementType::Resistor:
    case ElementType::Capacitor:
    case ElementType::Inductor:
    case ElementType::Diode:
      return {20, 40};
    case ElementType::Gnd:
    case ElementType::Vdd:
    case ElementType::Port:
      return {20, 20};
    default:
      return {40, 40};
  }
}

ElementType random_component(Rng& rng) {
  static const std::vector<std::pair<ElementType, int>> weights = {
      {ElementType::NMOS, 25},    {ElementType::PMOS, 20},  {ElementType::Resistor, 15},
      {ElementType::Capacitor, 12}, {ElementType::Inductor, 5}, {ElementType::Diode, 5},
      {ElementType::VSource, 7},  {ElementType::ISource, 6}, {ElementType::OpAmp, 5}};
  int total = 0;
  for (const auto& w : weights) total += w.second;
  int r = rng.uniform(0, total - 1);
  for (const auto& w : weights) {
    if (r < w.second) return w.first;
    r -= w.second;
  }
  return ElementType::Resistor;
}

struct Elem {
  ElementDetection det;
  int fixed_net = -1;  // symbols name exactly one net
};

struct RoutedPin {
  int elem = 0;
  int pin = 0;  // index in the pin table
  Point at;
  int out_dir = 0;
  Point access;
};

// Which pins must differ in net for a component to be meaningful.
bool pins_conflict(ElementType t, int a, int b) {
  switch (t) {
    case ElementType::NMOS:
    case ElementType::PMOS:
      return (a == 0 && b == 2) || (a == 2 && b == 0);
    case ElementType::OpAmp:
      return a != b;
    default:
      return a != b;  // two-terminal: p and n differ
  }
}

// Random connected netlist over the routed pins. Returns false when the
// repair loop does not converge.
bool assign_nets(Rng& rng, const std::vector<Elem>& elems, const std::vector<RoutedPin>& pins, int fixed_nets,
                 std::vector<int>& net_of, int& net_count) {
  const int ncomp = static_cast<int>(std::count_if(elems.begin(), elems.end(), [](const Elem& e) {
    return e.fixed_net < 0;
  }));
  const int internal = rng.uniform(std::max(1, ncomp / 2), ncomp + 1);
  int n = fixed_nets + internal;
  net_of.assign(pins.size(), -1);
  auto valid_for = [&](std::size_t pi, int net) {
    const auto& p = pins[pi];
    const auto t = elems[p.elem].det.etype;
    for (std::size_t q = 0; q < pins.size(); ++q) {
      if (q == pi || pins[q].elem != p.elem) continue;
      if (net_of[q] == net && pins_conflict(t, p.pin, pins[q].pin)) return false;
    }
    return true;
  };
  for (std::size_t i = 0; i < pins.size(); ++i) {
    const auto& e = elems[pins[i].elem];
    if (e.fixed_net >= 0) {
      net_of[i] = e.fixed_net;
      continue;
    }
    for (int tries = 0; tries < 50; ++tries) {
      const int net = rng.uniform(0, n - 1);
      if (valid_for(i, net)) {
        net_of[i] = net;
        break;
      }
    }
    if (net_of[i] < 0) return false;
  }

  auto is_comp_pin = [&](std::size_t i) { return elems[pins[i].elem].fixed_net < 0; };
  for (int iter = 0; iter < 400; ++iter) {
    std::vector<int> count(n, 0), comp_count(n, 0);
    for (std::size_t i = 0; i < pins.size(); ++i) {
      count[net_of[i]]++;
      if (is_comp_pin(i)) comp_count[net_of[i]]++;
    }
    // Movable pins: component pins on nets that keep >= 2 pins without them.
    auto movable = [&](int exclude_net) {
      std::vector<std::size_t> out;
      for (std::size_t i = 0; i < pins.size(); ++i) {
        if (is_comp_pin(i) && net_of[i] != exclude_net && count[net_of[i]] >= 3 &&
            (net_of[i] >= fixed_nets || comp_count[net_of[i]] >= 2)) {
          out.push_back(i);
        }
      }
      return out;
    };
    bool changed = false;
    for (int net = 0; net < n && !changed; ++net) {
      const bool fixed = net < fixed_nets;
      if (!fixed && count[net] == 0) continue;
      if (fixed ? (comp_count[net] >= 1 && count[net] >= 2) : count[net] >= 2) continue;
      if (!fixed && count[net] == 1) {
        // Fold the lone pin into another net.
        for (std::size_t i = 0; i < pins.size(); ++i) {
          if (net_of[i] != net) continue;
          for (int tries = 0; tries < 50; ++tries) {
            const int to = rng.uniform(0, n - 1);
            if (to != net && count[to] > 0 && valid_for(i, to)) {
              net_of[i] = to;
              changed = true;
              break;
            }
          }
        }
        if (!changed) return false;
        continue;
      }
      const auto cand = movable(net);
      for (int tries = 0; tries < 50 && !changed; ++tries) {
        if (cand.empty()) break;
        const std::size_t i = cand[rng.uniform(0, static_cast<int>(cand.size()) - 1)];
        if (valid_for(i, net)) {
          net_of[i] = net;
          changed = true;
        }
      }
      if (!changed) return false;
    }
    if (changed) continue;

    // Connectivity of the component graph through nets.
    std::vector<int> parent(elems.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto root = [&](int i) {
      while (parent[i] != i) i = parent[i] = parent[parent[i]];
      return i;
    };
    std::vector<int> first_elem(n, -1);
    for (std::size_t i = 0; i < pins.size(); ++i) {
      if (!is_comp_pin(i)) continue;
      const int net = net_of[i];
      if (first_elem[net] < 0) {
        first_elem[net] = pins[i].elem;
      } else {
        parent[root(pins[i].elem)] = root(first_elem[net]);
      }
    }
    int main_root = -1;
    int stray = -1;
    for (std::size_t e = 0; e < elems.size(); ++e) {
      if (elems[e].fixed_net >= 0) continue;
      if (main_root < 0) {
        main_root = root(static_cast<int>(e));
      } else if (root(static_cast<int>(e)) != main_root) {
        stray = static_cast<int>(e);
        break;
      }
    }
    if (stray < 0) {
      // Drop empty internal nets and renumber densely.
      std::vector<int> remap(n, -1);
      int next = 0;
      for (int net = 0; net < n; ++net) {
        if (net < fixed_nets || count[net] > 0) remap[net] = next++;
      }
      for (auto& v : net_of) v = remap[v];
      net_count = next;
      return true;
    }
    // Reconnect one pin of the stray component group into the main group.
    std::vector<std::size_t> cand;
    for (std::size_t i = 0; i < pins.size(); ++i) {
      if (is_comp_pin(i) && root(pins[i].elem) == root(stray)) cand.push_back(i);
    }
    std::vector<int> main_nets;
    for (int net = 0; net < n; ++net) {
      if (first_elem[net] >= 0 && root(first_elem[net]) == main_root) main_nets.push_back(net);
    }
    for (int tries = 0; tries < 100 && !changed; ++tries) {
      const std::size_t i = cand[rng.uniform(0, static_cast<int>(cand.size()) - 1)];
      const int to = main_nets[rng.uniform(0, static_cast<int>(main_nets.size()) - 1)];
      if (valid_for(i, to)) {
        net_of[i] = to;
        changed = true;
      }
    }
    if (!changed) return false;
  }
  return false;
}

// Routing grid state.
struct Grid {
  int nx = 0, ny = 0;
  std::vector<std::int8_t> blocked;
  std::vector<int> owner;       // net index or -1
  std::vector<int> reserved;    // access nodes: owning net, or -1
  std::vector<std::uint8_t> bits;  // wire directions leaving the node
  std::vector<std::uint8_t> no_tap;
  std::vector<std::uint8_t> is_access;
  std::vector<std::uint8_t> is_cross;

  Grid(int w, int h) : nx(w / kPitch + 1), ny(h / kPitch + 1) {
    const std::size_t n = static_cast<std::size_t>(nx) * ny;
    blocked.assign(n, 0);
    owner.assign(n, -1);
    reserved.assign(n, -1);
    bits.assign(n, 0);
    no_tap.assign(n, 0);
    is_access.assign(n, 0);
    is_cross.assign(n, 0);
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const int x = i * kPitch, y = j * kPitch;
        if (x < kPitch || y < kPitch || x > w - kPitch - 1 || y > h - kPitch - 1) blocked[id(i, j)] = 1;
      }
    }
  }
  int id(int i, int j) const { return j * nx + i; }
  int id(Point p) const { return id(p.x / kPitch, p.y / kPitch); }
  bool valid(int i, int j) const { return i >= 0 && j >= 0 && i < nx && j < ny; }
  Point pt(int node) const { return {(node % nx) * kPitch, (node / nx) * kPitch}; }
  int step(int node, int d) const {
    const int i = node % nx + kDirX[d], j = node / nx + kDirY[d];
    return valid(i, j) ? id(i, j) : -1;
  }
  int degree(int node) const { return std::popcount(static_cast<unsigned>(bits[node])); }
  bool free(int node) const { return node >= 0 && !blocked[node] && owner[node] < 0 && reserved[node] < 0; }
  bool straight_across(int node, int d) const {
    const int perp = (d + 1) % 4;
    return bits[node] == ((1u << perp) | (1u << opposite(perp)));
  }
};

struct RouteResult {
  std::vector<std::pair<Point, Point>> edges;  // per net
};

// Dijkstra over (node, incoming direction, must-go-straight) states.
bool route_pin(Grid& g, int net, int start, int start_dir, std::vector<std::pair<Point, Point>>& edges,
               std::vector<CrossPoint>& crosses, std::vector<int>& junction_nodes) {
  const int n = g.nx * g.ny;
  const int states = n * 8;
  auto sid = [](int node, int d, int m) { return (node * 4 + d) * 2 + m; };
  std::vector<int> dist(states, std::numeric_limits<int>::max());
  std::vector<int> prev(states, -1);
  std::vector<std::uint8_t> jumped(states, 0);
  using Item = std::pair<int, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  const int s0 = sid(start, start_dir, 0);
  dist[s0] = 0;
  pq.push({0, s0});
  int goal_state = -1, goal_node = -1, goal_cost = std::numeric_limits<int>::max();

  auto tappable = [&](int node) {
    if (g.owner[node] != net) return false;
    if (node == start) return false;
    const int deg = g.degree(node);
    if (deg == 1) return true;  // a connected pin's bare access node
    return !g.is_access[node] && !g.no_tap[node] && !g.is_cross[node] && deg <= 3;
  };

  while (!pq.empty()) {
    auto [cost, s] = pq.top();
    pq.pop();
    if (cost != dist[s]) continue;
    if (cost >= goal_cost) break;
    const int m = s % 2;
    const int d = (s / 2) % 4;
    const int node = s / 8;
    for (int nd = 0; nd < 4; ++nd) {
      if (nd == opposite(d)) continue;
      if (m && nd != d) continue;
      const int nb = g.step(node, nd);
      if (nb < 0 || g.blocked[nb]) continue;
      const int c = cost + 10 + (nd != d ? 15 : 0);
      if (g.owner[nb] == net) {
        if (tappable(nb) && !(g.bits[nb] & (1u << opposite(nd))) && c < goal_cost) {
          goal_cost = c;
          goal_state = s;
          goal_node = nb;
        }
        continue;
      }
      if (g.free(nb)) {
        const int t = sid(nb, nd, 0);
        if (c < dist[t]) {
          dist[t] = c;
          prev[t] = s;
          jumped[t] = 0;
          pq.push({c, t});
        }
        continue;
      }
      // Straight hop across a foreign wire.
      if (nd != d || g.owner[nb] < 0 || g.reserved[nb] >= 0 || g.is_access[nb] || g.is_cross[nb]) continue;
      if (!g.straight_across(nb, nd)) continue;
      const int perp = (nd + 1) % 4;
      const int f1 = g.step(nb, perp), f2 = g.step(nb, opposite(perp));
      if (f1 < 0 || f2 < 0 || !g.straight_across(f1, nd) || !g.straight_across(f2, nd) || g.is_access[f1] ||
          g.is_access[f2] || g.is_cross[f1] || g.is_cross[f2]) {
        continue;
      }
      const int b = g.step(nb, nd);
      if (b < 0 || !g.free(b)) continue;
      const int t = sid(b, nd, 1);
      const int cc = cost + 28;
      if (cc < dist[t]) {
        dist[t] = cc;
        prev[t] = s;
        jumped[t] = 1;
        pq.push({cc, t});
      }
    }
  }
  if (goal_state < 0) return false;

  // Unwind: nodes from start to the last free node, then the tap.
  std::vector<int> chain;
  std::vector<std::uint8_t> jumps;
  for (int s = goal_state; s >= 0; s = prev[s]) {
    chain.push_back(s / 8);
    jumps.push_back(jumped[s]);
  }
  std::reverse(chain.begin(), chain.end());
  std::reverse(jumps.begin(), jumps.end());
  chain.push_back(goal_node);
  jumps.push_back(0);

  for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
    const int a = chain[k], b = chain[k + 1];
    const Point pa = g.pt(a), pb = g.pt(b);
    const int dx = (pb.x > pa.x) - (pb.x < pa.x), dy = (pb.y > pa.y) - (pb.y < pa.y);
    int dir = 0;
    for (int q = 0; q < 4; ++q) {
      if (kDirX[q] == dx && kDirY[q] == dy) dir = q;
    }
    g.bits[a] |= static_cast<std::uint8_t>(1u << dir);
    g.bits[b] |= static_cast<std::uint8_t>(1u << opposite(dir));
    edges.push_back({pa, pb});
    if (jumps[k + 1]) {
      const int x = g.step(a, dir);
      g.is_cross[x] = 1;
      crosses.push_back({g.pt(x), CrossKind::Crossing});
      const int perp = (dir + 1) % 4;
      for (int q : {a, b, x, g.step(x, perp), g.step(x, opposite(perp)), g.step(b, dir), g.step(a, opposite(dir))}) {
        if (q >= 0) g.no_tap[q] = 1;
      }
    }
    g.owner[a] = net;
  }
  if (g.degree(goal_node) >= 3 &&
      std::find(junction_nodes.begin(), junction_nodes.end(), goal_node) == junction_nodes.end()) {
    junction_nodes.push_back(goal_node);
  }
  return true;
}

struct Circuit {
  std::vector<Elem> elems;
  std::vector<RoutedPin> pins;
  std::vector<int> net_of;
  int net_count = 0;
  std::vector<std::vector<std::pair<Point, Point>>> net_edges;
  std::vector<CrossPoint> crosses;
  std::vector<Point> junctions;
};

const std::vector<std::string> kPortNames = {"VIN", "VOUT", "VBIAS", "VREF", "CLK", "EN"};

bool build_circuit(const SynthConfig& cfg, Rng& rng, Circuit& c, std::string& why) {
  const PinTable& table = PinTable::builtin();
  const int ncomp = rng.uniform(cfg.min_elements, cfg.max_elements);
  const int nports = cfg.difficulty == Difficulty::Easy ? 0 : rng.uniform(0, 2);

  // Elements: components, then Gnd, Vdd and ports.
  std::vector<ElementType> types;
  for (int i = 0; i < ncomp; ++i) types.push_back(random_component(rng));
  c.elems.clear();
  for (int i = 0; i < ncomp; ++i) {
    Elem e;
    e.det.id = "E" + std::to_string(i + 1);
    e.det.etype = types[i];
    c.elems.push_back(e);
  }
  {
    Elem g;
    g.det.id = "GND1";
    g.det.etype = ElementType::Gnd;
    g.fixed_net = 0;
    c.elems.push_back(g);
    Elem v;
    v.det.id = "VDD1";
    v.det.etype = ElementType::Vdd;
    v.det.rotation.angle = Angle::Deg180;
    v.fixed_net = 1;
    c.elems.push_back(v);
  }
  for (int p = 0; p < nports; ++p) {
    Elem e;
    e.det.id = kPortNames[p];
    e.det.etype = ElementType::Port;
    e.det.rotation.angle = angle_from_degrees(90 * rng.uniform(0, 3));
    e.fixed_net = 2 + p;
    c.elems.push_back(e);
  }
  for (auto& e : c.elems) {
    if (e.fixed_net >= 0) continue;
    e.det.rotation.angle = angle_from_degrees(90 * rng.uniform(0, 3));
    if (e.det.etype == ElementType::NMOS || e.det.etype == ElementType::PMOS) e.det.rotation.mirrored = rng.chance(0.5);
  }

  // Placement on the grid with free space around every box.
  const int W = cfg.canvas.width, H = cfg.canvas.height;
  std::vector<BBox> placed;
  for (auto& e : c.elems) {
    const Size s = rotated_size(unrotated_size(e.det.etype), e.det.rotation.angle);
    bool ok = false;
    for (int tries = 0; tries < 1000 && !ok; ++tries) {
      const int gx = rng.uniform(kEdgeMargin / kPlaceGrid, (W - kEdgeMargin - s.width) / kPlaceGrid);
      const int gy = rng.uniform(kEdgeMargin / kPlaceGrid, (H - kEdgeMargin - s.height) / kPlaceGrid);
      const BBox b(gx * kPlaceGrid, gy * kPlaceGrid, gx * kPlaceGrid + s.width, gy * kPlaceGrid + s.height);
      const BBox grown = b.expanded(kBoxGap / 2 - 1);
      if (std::any_of(placed.begin(), placed.end(), [&](const BBox& o) { return bbox_intersects(grown, o.expanded(kBoxGap / 2 - 1)); })) {
        continue;
      }
      e.det.bbox = b;
      placed.push_back(b);
      ok = true;
    }
    if (!ok) {
      throw ValidationError("placement failed after 1000 retries for " + std::to_string(c.elems.size()) +
                            " elements on a " + std::to_string(W) + "x" + std::to_string(H) +
                            " canvas; use a larger canvas");
    }
  }

  // Pins: every terminal except the MOS bulk is routed.
  c.pins.clear();
  std::vector<Point> bulk_access;
  for (std::size_t ei = 0; ei < c.elems.size(); ++ei) {
    const auto& det = c.elems[ei].det;
    const auto pos = pin_positions(det, table);
    for (std::size_t k = 0; k < pos.size(); ++k) {
      RoutedPin rp;
      rp.elem = static_cast<int>(ei);
      rp.pin = static_cast<int>(k);
      rp.at = pos[k].at;
      const BBox& b = det.bbox;
      if (rp.at.y == b.min().y) rp.out_dir = 0;
      else if (rp.at.x == b.max().x) rp.out_dir = 1;
      else if (rp.at.y == b.max().y) rp.out_dir = 2;
      else rp.out_dir = 3;
      rp.access = {rp.at.x + kDirX[rp.out_dir] * kPitch, rp.at.y + kDirY[rp.out_dir] * kPitch};
      if (static_cast<int>(k) == PinTable::bulk_index(det.etype)) {
        bulk_access.push_back(rp.access);
        continue;
      }
      c.pins.push_back(rp);
    }
  }

  if (!assign_nets(rng, c.elems, c.pins, 2 + nports, c.net_of, c.net_count)) {
    why = "netlist repair did not converge";
    return false;
  }

  Grid g(W, H);
  for (const auto& e : c.elems) {
    const BBox b = e.det.bbox.expanded(5);
    for (int j = std::max(0, b.min().y / kPitch); j <= std::min(g.ny - 1, b.max().y / kPitch + 1); ++j) {
      for (int i = std::max(0, b.min().x / kPitch); i <= std::min(g.nx - 1, b.max().x / kPitch + 1); ++i) {
        if (bbox_contains(b, {i * kPitch, j * kPitch})) g.blocked[g.id(i, j)] = 1;
      }
    }
  }
  for (Point p : bulk_access) {
    if (g.valid(p.x / kPitch, p.y / kPitch)) g.blocked[g.id(p)] = 1;
  }
  for (std::size_t i = 0; i < c.pins.size(); ++i) {
    const Point a = c.pins[i].access;
    if (a.x < 0 || a.y < 0 || !g.valid(a.x / kPitch, a.y / kPitch) || g.blocked[g.id(a)] || g.reserved[g.id(a)] >= 0) {
      why = "pin access blocked";
      return false;
    }
    g.reserved[g.id(a)] = c.net_of[i];
    g.is_access[g.id(a)] = 1;
  }

  c.net_edges.assign(c.net_count, {});
  c.crosses.clear();
  c.junctions.clear();
  std::vector<int> junction_nodes;
  for (int net = 0; net < c.net_count; ++net) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < c.pins.size(); ++i) {
      if (c.net_of[i] == net) members.push_back(i);
    }
    if (members.size() < 2) {
      why = "net with fewer than two pins";
      return false;
    }
    auto attach = [&](std::size_t pi) {
      const int a = g.id(c.pins[pi].access);
      g.reserved[a] = -1;
      g.owner[a] = net;
      g.bits[a] |= static_cast<std::uint8_t>(1u << opposite(c.pins[pi].out_dir));  // lead into the box
      c.net_edges[net].push_back({c.pins[pi].at, c.pins[pi].access});
    };
    attach(members[0]);
    std::vector<char> done(members.size(), 0);
    done[0] = 1;
    for (std::size_t round = 1; round < members.size(); ++round) {
      // Nearest unconnected pin to the tree (Manhattan, ties by order).
      std::size_t pick = 0;
      long best = std::numeric_limits<long>::max();
      for (std::size_t k = 0; k < members.size(); ++k) {
        if (done[k]) continue;
        const Point a = c.pins[members[k]].access;
        long dmin = std::numeric_limits<long>::max();
        for (const auto& [p, q] : c.net_edges[net]) {
          dmin = std::min<long>(dmin, std::abs(a.x - q.x) + std::abs(a.y - q.y));
        }
        if (dmin < best) {
          best = dmin;
          pick = k;
        }
      }
      done[pick] = 1;
      const std::size_t pi = members[pick];
      const int start = g.id(c.pins[pi].access);
      attach(pi);
      g.owner[start] = net;
      // The start node must not count as a tap target of itself; route_pin
      // excludes it explicitly.
      if (!route_pin(g, net, start, c.pins[pi].out_dir, c.net_edges[net], c.crosses, junction_nodes)) {
        why = "routing failed";
        return false;
      }
    }
  }
  for (int node : junction_nodes) c.junctions.push_back(g.pt(node));
  return true;
}

// Axis-aligned thick line, corners filled by extending both ends.
template <class Fn>
void stamp_segment(Point a, Point b, int stroke, Fn&& put) {
  const int off0 = -(stroke / 2), off1 = off0 + stroke - 1;
  const int x0 = std::min(a.x, b.x) + off0, x1 = std::max(a.x, b.x) + off1;
  const int y0 = std::min(a.y, b.y) + off0, y1 = std::max(a.y, b.y) + off1;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) put(x, y);
  }
}

template <class Fn>
void stamp_dot(Point c, int stroke, Fn&& put) {
  const double r = stroke + 0.5;
  const int ri = stroke + 1;
  for (int dy = -ri; dy <= ri; ++dy) {
    for (int dx = -ri; dx <= ri; ++dx) {
      if (dx * dx + dy * dy <= r * r) put(c.x + dx, c.y + dy);
    }
  }
}

void draw_glyph(GrayImage& img, const ElementDetection& det) {
  auto put = [&](int x, int y) {
    if (x >= 0 && y >= 0 && x < img.width && y < img.height) img.set(x, y, kInk);
  };
  for (const auto& s : placed_glyph(det)) {
    const std::size_t n = s.pts.size();
    const std::size_t segs = s.closed ? n : n - 1;
    for (std::size_t i = 0; i < segs; ++i) {
      const auto [ax, ay] = s.pts[i];
      const auto [bx, by] = s.pts[(i + 1) % n];
      const double len = std::hypot(bx - ax, by - ay);
      const int steps = std::max(1, static_cast<int>(std::ceil(len * 4)));
      for (int k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) / steps;
        const double x = ax + (bx - ax) * t, y = ay + (by - ay) * t;
        const int ix = static_cast<int>(std::floor(x - 0.5)), iy = static_cast<int>(std::floor(y - 0.5));
        put(ix, iy);
        put(ix + 1, iy);
        put(ix, iy + 1);
        put(ix + 1, iy + 1);
      }
    }
    if (s.filled) {
      double minx = 1e9, miny = 1e9, maxx = -1e9, maxy = -1e9;
      for (auto [x, y] : s.pts) {
        minx = std::min(minx, x);
        maxx = std::max(maxx, x);
        miny = std::min(miny, y);
        maxy = std::max(maxy, y);
      }
      for (int y = static_cast<int>(std::floor(miny)); y <= static_cast<int>(std::ceil(maxy)); ++y) {
        for (int x = static_cast<int>(std::floor(minx)); x <= static_cast<int>(std::ceil(maxx)); ++x) {
          bool inside = false;
          for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            const auto [xi, yi] = s.pts[i];
            const auto [xj, yj] = s.pts[j];
            if ((yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi) inside = !inside;
          }
          if (inside) put(x, y);
        }
      }
    }
  }
}

BitMask wire_pipeline_mask(const GrayImage& img, std::span<const BBox> boxes) {
  return subtract_regions(binarize(img, ThresholdSpec::fixed(128), Exec::Serial), boxes, 2);
}

// Merges collinear touching grid edges into maximal segments.
std::vector<Segment> merge_edges(const std::vector<std::pair<Point, Point>>& edges) {
  std::map<int, std::vector<std::pair<int, int>>> rows, cols;
  for (auto [a, b] : edges) {
    if (a.y == b.y) rows[a.y].push_back({std::min(a.x, b.x), std::max(a.x, b.x)});
    else cols[a.x].push_back({std::min(a.y, b.y), std::max(a.y, b.y)});
  }
  std::vector<Segment> out;
  auto merge = [](std::vector<std::pair<int, int>>& v) {
    std::sort(v.begin(), v.end());
    std::vector<std::pair<int, int>> m;
    for (auto iv : v) {
      if (!m.empty() && iv.first <= m.back().second) {
        m.back().second = std::max(m.back().second, iv.second);
      } else {
        m.push_back(iv);
      }
    }
    return m;
  };
  for (auto& [y, v] : rows) {
    for (auto [x0, x1] : merge(v)) out.emplace_back(Point{x0, y}, Point{x1, y});
  }
  for (auto& [x, v] : cols) {
    for (auto [y0, y1] : merge(v)) out.emplace_back(Point{x, y0}, Point{x, y1});
  }
  return out;
}

}  // namespace

GrayImage degrade_resolution(const GrayImage& img) {
  GrayImage out(img.width, img.height);
  for (int by = 0; by < img.height; by += 2) {
    for (int bx = 0; bx < img.width; bx += 2) {
      int sum = 0, n = 0;
      for (int y = by; y < std::min(by + 2, img.height); ++y) {
        for (int x = bx; x < std::min(bx + 2, img.width); ++x) {
          sum += img.get(x, y);
          ++n;
        }
      }
      const auto v = static_cast<std::uint8_t>(sum / n);
      for (int y = by; y < std::min(by + 2, img.height); ++y) {
        for (int x = bx; x < std::min(bx + 2, img.width); ++x) out.set(x, y, v);
      }
    }
  }
  return out;
}

SynthResult generate(const SynthConfig& cfg) {
  if (cfg.min_elements < 2 || cfg.max_elements < cfg.min_elements) {
    throw ValidationError("element count range must satisfy 2 <= min <= max");
  }
  if (cfg.canvas.width < 256 || cfg.canvas.height < 256) throw ValidationError("canvas must be at least 256x256");
  if (cfg.stroke < 1 || cfg.stroke > 4) throw ValidationError("stroke must be between 1 and 4 px");

  Circuit c;
  std::string why;
  bool ok = false;
  for (int attempt = 0; attempt < kAttempts && !ok; ++attempt) {
    Rng rng(cfg.seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(attempt) * 0xD1B54A32D192ED03ull + 1);
    Circuit trial;
    if (!build_circuit(cfg, rng, trial, why)) continue;
    if (cfg.difficulty == Difficulty::Hard && trial.crosses.empty()) {
      why = "no crossing for a hard circuit";
      continue;
    }
    c = std::move(trial);
    ok = true;
  }
  if (!ok) throw ValidationError("synthesis failed for seed " + std::to_string(cfg.seed) + ": " + why);

  const int W = cfg.canvas.width, H = cfg.canvas.height;
  SynthResult out;
  GroundTruth& gt = out.truth;
  gt.detections.image = "image.pgm";
  gt.detections.width = W;
  gt.detections.height = H;
  for (const auto& e : c.elems) gt.detections.elements.push_back(e.det);
  gt.detections.crosspoints = c.crosses;
  for (Point j : c.junctions) gt.detections.crosspoints.push_back({j, CrossKind::Junction});
  std::stable_sort(gt.detections.crosspoints.begin(), gt.detections.crosspoints.end(),
                   [](const CrossPoint& a, const CrossPoint& b) { return a.at < b.at; });

  // Wires, per net, into a label raster and the image.
  GrayImage img(W, H, 255);
  GrayImage wires(W, H, 255);
  LabelMap clean(W, H);
  for (int net = 0; net < c.net_count; ++net) {
    auto put = [&](int x, int y) {
      if (x < 0 || y < 0 || x >= W || y >= H) return;
      img.set(x, y, kInk);
      wires.set(x, y, kInk);
      if (clean.get(x, y) == 0) clean.set(x, y, net + 1);
    };
    for (auto [a, b] : c.net_edges[net]) stamp_segment(a, b, cfg.stroke, put);
  }
  for (Point j : c.junctions) {
    const int net = clean.get(j.x, j.y);
    stamp_dot(j, cfg.stroke, [&](int x, int y) {
      if (x < 0 || y < 0 || x >= W || y >= H) return;
      img.set(x, y, kInk);
      wires.set(x, y, kInk);
      if (clean.get(x, y) == 0) clean.set(x, y, net);
    });
  }
  for (const auto& e : c.elems) draw_glyph(img, e.det);

  std::vector<BBox> boxes;
  for (const auto& e : c.elems) boxes.push_back(e.det.bbox);

  // Ground-truth netlist from the generator's own net indices.
  std::vector<NetBinding> bindings;
  const auto& table = PinTable::builtin();
  for (std::size_t i = 0; i < c.pins.size(); ++i) {
    const auto& p = c.pins[i];
    const auto& det = c.elems[p.elem].det;
    bindings.push_back({{det.id, table.spec(det.etype).pins[p.pin].name, p.at}, c.net_of[i] + 1, 0.0});
  }
  const Assembly asmb = assemble_netlist(gt.detections.elements, bindings);
  gt.netlist = asmb.netlist;

  std::vector<NetGeometry> geoms;
  for (int net = 0; net < c.net_count; ++net) {
    NetGeometry ng;
    ng.label = net + 1;
    ng.segments = merge_edges(c.net_edges[net]);
    geoms.push_back(std::move(ng));
  }
  gt.schematic = build_schematic(cfg.canvas, gt.detections.elements, geoms, asmb.net_names, bindings);

  if (cfg.markings) gt.marking_boxes = add_markings(img, gt, cfg, cfg.seed ^ 0x5DEECE66Dull);

  if (cfg.difficulty == Difficulty::Hard) {
    img = degrade_resolution(img);
    wires = degrade_resolution(wires);
  }
  gt.wire_mask = wire_pipeline_mask(wires, boxes);

  // Degradation grows strokes by at most a pixel; grown pixels take the
  // label of the nearest clean pixel.
  gt.net_pixels = LabelMap(W, H);
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      if (!gt.wire_mask.get(x, y)) continue;
      int label = clean.get(x, y);
      for (int r = 1; label == 0 && r <= 4; ++r) {
        int best = std::numeric_limits<int>::max();
        for (int dy = -r; dy <= r; ++dy) {
          for (int dx = -r; dx <= r; ++dx) {
            const int l = clean.at(x + dx, y + dy);
            if (l == 0) continue;
            const int d2 = dx * dx + dy * dy;
            if (d2 < best) {
              best = d2;
              label = l;
            }
          }
        }
      }
      gt.net_pixels.set(x, y, label);
    }
  }
  gt.net_pixels.set_label_count(c.net_count);
  out.image = std::move(img);
  return out;
}

std::vector<BBox> add_markings(GrayImage& img, const GroundTruth& gt, const SynthConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  const int W = img.width, H = img.height;
  std::vector<BBox> boxes;
  for (const auto& e : gt.detections.elements) boxes.push_back(e.bbox);
  const bool hard = cfg.difficulty == Difficulty::Hard;
  const int want = rng.uniform(cfg.min_markings, cfg.max_markings);
  std::vector<BBox> placed;

  for (int tries = 0; tries < 80 * std::max(1, want) && static_cast<int>(placed.size()) < want; ++tries) {
    const int w = 10 * rng.uniform(4, 20), h = 10 * rng.uniform(3, 16);
    if (W < w + 20 || H < h + 20) continue;
    const int x0 = 10 * rng.uniform(0, (W - w - 20) / 10) + 5, y0 = 10 * rng.uniform(0, (H - h - 20) / 10) + 5;
    const BBox cand(x0, y0, x0 + w, y0 + h);
    if (cand.max().x >= W || cand.max().y >= H) continue;
    const std::array<BBox, 4> edges = {BBox(x0, y0, x0 + w, y0), BBox(x0, y0 + h, x0 + w, y0 + h),
                                       BBox(x0, y0, x0, y0 + h), BBox(x0 + w, y0, x0 + w, y0 + h)};
    bool clash = false;
    for (const auto& b : boxes) {
      for (const auto& e : edges) clash = clash || bbox_intersects(e, b.expanded(2));
    }
    for (const auto& p : placed) clash = clash || bbox_intersects(cand.expanded(10), p);
    if (clash) continue;

    // Local replay of the extractor on a window around the rectangle.
    const int wx0 = std::max(0, (x0 - 8) & ~1), wy0 = std::max(0, (y0 - 8) & ~1);
    const int wx1 = std::min(W - 1, x0 + w + 9), wy1 = std::min(H - 1, y0 + h + 9);
    GrayImage clean(wx1 - wx0 + 1, wy1 - wy0 + 1);
    for (int y = wy0; y <= wy1; ++y) {
      for (int x = wx0; x <= wx1; ++x) clean.set(x - wx0, y - wy0, img.get(x, y));
    }
    const auto shade = static_cast<std::uint8_t>(rng.uniform(0, 80));
    GrayImage marked = clean;
    auto in_outline = [&](int x, int y) {
      return ((y == y0 || y == y0 + h) && x >= x0 && x <= x0 + w) || ((x == x0 || x == x0 + w) && y >= y0 && y <= y0 + h);
    };
    for (int y = wy0; y <= wy1; ++y) {
      for (int x = wx0; x <= wx1; ++x) {
        if (in_outline(x, y)) marked.set(x - wx0, y - wy0, std::min(marked.get(x - wx0, y - wy0), shade));
      }
    }
    std::vector<BBox> local_boxes;
    for (const auto& b : boxes) {
      if (b.max().x < wx0 - 3 || b.min().x > wx1 + 3 || b.max().y < wy0 - 3 || b.min().y > wy1 + 3) continue;
      local_boxes.emplace_back(b.min().x - wx0, b.min().y - wy0, b.max().x - wx0, b.max().y - wy0);
    }
    const GrayImage c_img = hard ? degrade_resolution(clean) : clean;
    const GrayImage m_img = hard ? degrade_resolution(marked) : marked;
    const BitMask want_mask = wire_pipeline_mask(c_img, local_boxes);
    const IgnoreRegion reg{BBox(x0 - wx0, y0 - wy0, x0 + w - wx0, y0 + h - wy0), IgnoreRegion::Kind::Outline};
    const BitMask got = subtract_regions(
        apply_ignore_regions(binarize(m_img, ThresholdSpec::fixed(128), Exec::Serial), std::span(&reg, 1)), local_boxes,
        2);
    if (!(got == want_mask)) continue;

    for (int y = wy0; y <= wy1; ++y) {
      for (int x = wx0; x <= wx1; ++x) img.set(x, y, marked.get(x - wx0, y - wy0));
    }
    placed.push_back(cand);
  }

  // Pseudo-text: short 1-px strokes well clear of all ink.
  const int tw = 24, th = 10;
  const bool room = W >= tw + 30 && H >= th + 30;
  const int texts = want > 0 && room ? rng.uniform(1, 4) : 0;
  for (int k = 0, tries = 0; k < texts && tries < 200; ++tries) {
    const int x0 = rng.uniform(14, W - tw - 15), y0 = rng.uniform(14, H - th - 15);
    const BBox area(x0, y0, x0 + tw, y0 + th);
    bool clash = false;
    const BBox keep = area.expanded(12);
    for (int y = std::max(0, keep.min().y); y <= std::min(H - 1, keep.max().y) && !clash; ++y) {
      for (int x = std::max(0, keep.min().x); x <= std::min(W - 1, keep.max().x); ++x) {
        if (img.get(x, y) < 200) {
          clash = true;
          break;
        }
      }
    }
    for (const auto& b : boxes) clash = clash || bbox_intersects(area, b.expanded(2));
    if (clash) continue;
    const int letters = rng.uniform(2, 4);
    for (int l = 0; l < letters; ++l) {
      const int lx = x0 + l * 6;
      const int strokes = rng.uniform(2, 3);
      for (int s = 0; s < strokes; ++s) {
        const int ax = lx + rng.uniform(0, 4), ay = y0 + rng.uniform(0, th);
        const int bx = lx + rng.uniform(0, 4), by = y0 + rng.uniform(0, th);
        const int steps = std::max(std::abs(bx - ax), std::abs(by - ay));
        for (int t = 0; t <= steps; ++t) {
          const int x = steps ? ax + (bx - ax) * t / steps : ax;
          const int y = steps ? ay + (by - ay) * t / steps : ay;
          img.set(x, y, 40);
        }
      }
    }
    ++k;
  }
  return placed;
}

namespace {

using nlohmann::json;

std::string corpus_name(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "c%04zu", i);
  return buf;
}

}  // namespace

Manifest emit_corpus(const std::vector<SynthConfig>& configs, const std::filesystem::path& out_dir, int jobs) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  Manifest m;
  m.circuits.resize(configs.size());
  std::vector<std::string> errors(configs.size());
  const int n = static_cast<int>(configs.size());
  auto one = [&](int i) {
    try {
      const auto& cfg = configs[i];
      ManifestEntry e;
      e.name = corpus_name(static_cast<std::size_t>(i));
      e.seed = cfg.seed;
      e.difficulty = cfg.difficulty;
      e.markings = cfg.markings;
      const auto dir = out_dir / e.name;
      std::filesystem::create_directories(dir);
      const SynthResult r = generate(cfg);
      e.image = e.name + "/image.pgm";
      e.detections = e.name + "/detections.json";
      e.truth = e.name + "/truth.scs";
      e.mask = e.name + "/mask.pbm";
      e.schematic = e.name + "/schematic.json";
      save_pgm(r.image, out_dir / e.image);
      save_detections(r.truth.detections, out_dir / e.detections);
      save_spectre(r.truth.netlist, out_dir / e.truth);
      save_mask(r.truth.wire_mask, out_dir / e.mask);
      save_schematic(r.truth.schematic, out_dir / e.schematic);
      if (cfg.markings) {
        e.ignore_regions = e.name + "/markings.json";
        std::vector<IgnoreRegion> regs;
        for (const auto& b : r.truth.marking_boxes) regs.push_back({b, IgnoreRegion::Kind::Outline});
        save_ignore_regions(regs, out_dir / e.ignore_regions);
      }
      m.circuits[i] = std::move(e);
    } catch (const std::exception& ex) {
      errors[i] = ex.what();
    }
  };
  if (jobs == 1 || n <= 1) {
    for (int i = 0; i < n; ++i) one(i);
  } else {
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs > 0 ? jobs : omp_get_max_threads())
    for (int i = 0; i < n; ++i) one(i);
  }
  for (int i = 0; i < n; ++i) {
    if (!errors[i].empty()) throw Error("circuit " + corpus_name(static_cast<std::size_t>(i)) + ": " + errors[i]);
  }
  save_manifest(m, out_dir / "manifest.json");
  return m;
}

void save_manifest(const Manifest& m, const std::filesystem::path& path) {
  json j;
  j["circuits"] = json::array();
  for (const auto& e : m.circuits) {
    json c = {{"name", e.name},
              {"seed", e.seed},
              {"difficulty", std::string(to_string(e.difficulty))},
              {"markings", e.markings},
              {"image", e.image},
              {"detections", e.detections},
              {"truth", e.truth},
              {"mask", e.mask},
              {"schematic", e.schematic}};
    if (!e.ignore_regions.empty()) c["ignore_regions"] = e.ignore_regions;
    j["circuits"].push_back(std::move(c));
  }
  detail::write_file(path, j.dump(1) + "\n");
}

Manifest load_manifest(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(detail::read_file(path));
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  Manifest m;
  try {
    for (const auto& c : j.at("circuits")) {
      ManifestEntry e;
      e.name = c.at("name").get<std::string>();
      e.seed = c.value("seed", std::uint64_t{0});
      e.difficulty = difficulty_from_string(c.value("difficulty", std::string("easy")));
      e.markings = c.value("markings", false);
      e.image = c.at("image").get<std::string>();
      e.detections = c.at("detections").get<std::string>();
      e.truth = c.at("truth").get<std::string>();
      e.mask = c.value("mask", std::string());
      e.schematic = c.value("schematic", std::string());
      e.ignore_regions = c.value("ignore_regions", std::string());
      m.circuits.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return m;
}

}  // namespace netlift
