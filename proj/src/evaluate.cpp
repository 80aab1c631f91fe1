#include "netlift/evaluate.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace netlift {

Confusion count_confusion(const Netlist& gt, const Netlist& pred, const NameMap& net_map, const NameMap& comp_map) {
  Confusion c;
  std::map<std::string, const Component*> pred_by_name;
  for (const auto& p : pred.components) pred_by_name[p.name] = &p;
  std::set<std::string> pred_used;
  for (const auto& g : gt.components) {
    auto it = comp_map.find(g.name);
    const Component* p = nullptr;
    if (it != comp_map.end()) {
      auto pit = pred_by_name.find(it->second);
      if (pit != pred_by_name.end()) p = pit->second;
    }
    if (p == nullptr) {
      c.fn += 1 + static_cast<long>(g.pins.size());
      continue;
    }
    pred_used.insert(p->name);
    if (g.etype == p->etype) {
      c.tp += 1;
    } else {
      c.fn += 1;
      c.fp += 1;
    }
    const std::size_t common = std::min(g.pins.size(), p->pins.size());
    for (std::size_t i = 0; i < common; ++i) {
      auto nm = net_map.find(g.pins[i]);
      if (nm != net_map.end() && nm->second == p->pins[i]) {
        c.tp += 1;
      } else {
        c.fn += 1;
        c.fp += 1;
      }
    }
    c.fn += static_cast<long>(g.pins.size() - common);
    c.fp += static_cast<long>(p->pins.size() - common);
  }
  for (const auto& p : pred.components) {
    if (!pred_used.contains(p.name)) c.fp += 1 + static_cast<long>(p.pins.size());
  }
  return c;
}

Scores f1_from_counts(long tp, long fp, long fn) {
  Scores s;
  s.precision = tp + fp == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  s.recall = tp + fn == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  s.f1 = s.precision + s.recall == 0 ? 0.0 : 2 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

namespace {

struct Indexed {
  struct Comp {
    std::string name;
    ElementType etype;
    std::vector<int> pins;
  };
  std::vector<std::string> nets;
  std::vector<Comp> comps;
  long items = 0;

  explicit Indexed(const Netlist& n) {
    std::set<std::string> names = n.nets;
    for (const auto& c : n.components) names.insert(c.pins.begin(), c.pins.end());
    nets.assign(names.begin(), names.end());
    for (const auto& c : n.components) {
      Comp k{c.name, c.etype, {}};
      for (const auto& p : c.pins) {
        k.pins.push_back(static_cast<int>(std::lower_bound(nets.begin(), nets.end(), p) - nets.begin()));
      }
      items += 1 + static_cast<long>(c.pins.size());
      comps.push_back(std::move(k));
    }
  }
};

// Maximum-weight assignment on a non-negative matrix (rows x cols); returns
// the total and fills row -> col (or -1).
long max_matching(const std::vector<std::vector<long>>& w, std::size_t rows, std::size_t cols, std::vector<int>& match) {
  const std::size_t n = std::max(rows, cols);
  match.assign(rows, -1);
  if (n == 0) return 0;
  constexpr long kInf = std::numeric_limits<long>::max() / 4;
  auto cost = [&](std::size_t i, std::size_t j) -> long {
    return (i < rows && j < cols) ? -w[i][j] : 0;
  };
  std::vector<long> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      long delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const long cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  long total = 0;
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t i = p[j] - 1;
    if (i < rows && j - 1 < cols) {
      match[i] = static_cast<int>(j - 1);
      total += w[i][j - 1];
    }
  }
  return total;
}

constexpr int kUndecided = -2;
constexpr int kUnmapped = -1;

struct Search {
  const Indexed& g;
  const Indexed& p;
  std::uint64_t budget;
  std::uint64_t nodes = 0;
  bool aborted = false;

  std::vector<int> assign;  // gt net -> pred net, kUnmapped or kUndecided
  std::vector<char> used;   // pred net taken
  std::vector<std::vector<long>> w;

  long best = -1;
  bool found = false;
  std::vector<int> best_assign;

  Search(const Indexed& gi, const Indexed& pi, std::uint64_t b)
      : g(gi), p(pi), budget(b), assign(gi.nets.size(), kUndecided), used(pi.nets.size(), 0),
        w(gi.comps.size(), std::vector<long>(pi.comps.size(), 0)) {}

  // Pin agreement given the current partial map; undecided gt nets agree
  // optimistically with any still-free pred net.
  long bound(std::vector<int>* match = nullptr) {
    for (std::size_t a = 0; a < g.comps.size(); ++a) {
      const auto& ga = g.comps[a];
      for (std::size_t b = 0; b < p.comps.size(); ++b) {
        const auto& pb = p.comps[b];
        long s = ga.etype == pb.etype ? 1 : 0;
        const std::size_t common = std::min(ga.pins.size(), pb.pins.size());
        for (std::size_t i = 0; i < common; ++i) {
          const int m = assign[ga.pins[i]];
          if (m == pb.pins[i] || (m == kUndecided && !used[pb.pins[i]])) ++s;
        }
        w[a][b] = s;
      }
    }
    std::vector<int> local;
    return max_matching(w, g.comps.size(), p.comps.size(), match ? *match : local);
  }

  void dfs(std::size_t depth) {
    if (aborted) return;
    if (++nodes > budget) {
      aborted = true;
      return;
    }
    const long ub = bound();
    if (found ? ub <= best : ub < best) return;
    if (depth == g.nets.size()) {
      // All decided: the bound is exact.
      best = ub;
      found = true;
      best_assign = assign;
      return;
    }
    for (std::size_t c = 0; c < p.nets.size(); ++c) {
      if (used[c]) continue;
      assign[depth] = static_cast<int>(c);
      used[c] = 1;
      dfs(depth + 1);
      used[c] = 0;
      assign[depth] = kUndecided;
      if (aborted) return;
    }
    assign[depth] = kUnmapped;
    dfs(depth + 1);
    assign[depth] = kUndecided;
  }
};

// Exact TP of a complete net map, with the matching that achieves it.
long score_map(const Indexed& g, const Indexed& p, const std::vector<int>& assign, std::vector<int>& match) {
  Search s(g, p, 0);
  s.assign = assign;
  for (int& a : s.assign) {
    if (a == kUndecided) a = kUnmapped;
  }
  return s.bound(&match);
}

// Greedy by incidence signature similarity, then alternate between optimal
// component matching and optimal net assignment until TP stops improving.
std::vector<int> heuristic_map(const Indexed& g, const Indexed& p) {
  using Sig = std::map<std::pair<int, int>, int>;  // (etype, pin index) -> count
  auto sigs = [](const Indexed& x) {
    std::vector<Sig> s(x.nets.size());
    for (const auto& c : x.comps) {
      for (std::size_t i = 0; i < c.pins.size(); ++i) s[c.pins[i]][{static_cast<int>(c.etype), static_cast<int>(i)}]++;
    }
    return s;
  };
  const auto sg = sigs(g), sp = sigs(p);
  struct Cand {
    long sim;
    std::size_t a, b;
  };
  std::vector<Cand> cands;
  for (std::size_t a = 0; a < g.nets.size(); ++a) {
    for (std::size_t b = 0; b < p.nets.size(); ++b) {
      long sim = 0;
      for (const auto& [k, n] : sg[a]) {
        auto it = sp[b].find(k);
        if (it != sp[b].end()) sim += std::min(n, it->second);
      }
      cands.push_back({sim, a, b});
    }
  }
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) { return x.sim > y.sim; });
  std::vector<int> assign(g.nets.size(), kUnmapped);
  std::vector<char> used(p.nets.size(), 0);
  for (const auto& c : cands) {
    if (assign[c.a] != kUnmapped || used[c.b]) continue;
    assign[c.a] = static_cast<int>(c.b);
    used[c.b] = 1;
  }

  std::vector<int> match;
  long tp = score_map(g, p, assign, match);
  for (int iter = 0; iter < 16; ++iter) {
    std::vector<std::vector<long>> agree(g.nets.size(), std::vector<long>(p.nets.size(), 0));
    for (std::size_t a = 0; a < g.comps.size(); ++a) {
      if (match[a] < 0) continue;
      const auto& ga = g.comps[a];
      const auto& pb = p.comps[match[a]];
      const std::size_t common = std::min(ga.pins.size(), pb.pins.size());
      for (std::size_t i = 0; i < common; ++i) agree[ga.pins[i]][pb.pins[i]]++;
    }
    std::vector<int> net_match;
    max_matching(agree, g.nets.size(), p.nets.size(), net_match);
    std::vector<int> next(g.nets.size(), kUnmapped);
    for (std::size_t a = 0; a < g.nets.size(); ++a) next[a] = net_match[a];
    std::vector<int> next_match;
    const long next_tp = score_map(g, p, next, next_match);
    if (next_tp <= tp) break;
    tp = next_tp;
    assign = std::move(next);
    match = std::move(next_match);
  }
  return assign;
}

}  // namespace

EvalReport best_permutation_score(const Netlist& gt, const Netlist& pred, std::uint64_t budget) {
  const Indexed g(gt), p(pred);
  EvalReport r;

  std::vector<int> heur = heuristic_map(g, p);
  std::vector<int> match;
  const long heur_tp = score_map(g, p, heur, match);

  Search s(g, p, budget);
  s.best = heur_tp;
  s.dfs(0);
  r.nodes = s.nodes;
  r.exact = !s.aborted;

  std::vector<int> assign = s.found && s.best >= heur_tp ? s.best_assign : heur;
  score_map(g, p, assign, match);

  for (std::size_t a = 0; a < g.nets.size(); ++a) {
    if (assign[a] >= 0) r.net_mapping[g.nets[a]] = p.nets[assign[a]];
  }
  // Zero-weight pairs score exactly like two unmatched components.
  for (std::size_t a = 0; a < g.comps.size(); ++a) {
    if (match[a] < 0) continue;
    const auto& ga = g.comps[a];
    const auto& pb = p.comps[match[a]];
    long wgt = ga.etype == pb.etype ? 1 : 0;
    for (std::size_t i = 0; i < std::min(ga.pins.size(), pb.pins.size()); ++i) {
      wgt += assign[ga.pins[i]] == pb.pins[i] ? 1 : 0;
    }
    if (wgt > 0) r.component_mapping[ga.name] = pb.name;
  }
  const Confusion c = count_confusion(gt, pred, r.net_mapping, r.component_mapping);
  r.tp = c.tp;
  r.fp = c.fp;
  r.fn = c.fn;
  const Scores sc = f1_from_counts(c.tp, c.fp, c.fn);
  r.precision = sc.precision;
  r.recall = sc.recall;
  r.f1 = sc.f1;
  return r;
}

std::string report_json(const EvalReport& r) {
  nlohmann::json j;
  j["tp"] = r.tp;
  j["fp"] = r.fp;
  j["fn"] = r.fn;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["f1"] = r.f1;
  j["exact"] = r.exact;
  j["net_mapping"] = r.net_mapping;
  j["component_mapping"] = r.component_mapping;
  return j.dump(1) + "\n";
}

std::string report_text(const EvalReport& r) {
  std::string out = fmt::format("tp {}  fp {}  fn {}\nprecision {:.4f}  recall {:.4f}  f1 {:.4f}{}\n", r.tp, r.fp,
                                r.fn, r.precision, r.recall, r.f1, r.exact ? "" : "  (heuristic)");
  for (const auto& [a, b] : r.net_mapping) out += fmt::format("  net {} -> {}\n", a, b);
  return out;
}

}  // namespace netlift
