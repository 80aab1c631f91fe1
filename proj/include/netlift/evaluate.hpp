#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "netlift/netlist.hpp"

namespace netlift {

struct Confusion {
  long tp = 0;
  long fp = 0;
  long fn = 0;

  friend bool operator==(const Confusion&, const Confusion&) = default;
};

struct Scores {
  double precision = 1;
  double recall = 1;
  double f1 = 1;
};

struct EvalReport {
  long tp = 0, fp = 0, fn = 0;
  double precision = 1, recall = 1, f1 = 1;
  std::map<std::string, std::string> net_mapping;        // gt -> pred
  std::map<std::string, std::string> component_mapping;  // gt -> pred
  bool exact = true;
  std::uint64_t nodes = 0;  // search nodes expanded
};

using NameMap = std::map<std::string, std::string>;

// Items are components (scored on type) and per-pin connections. A
// type-mismatched pair costs one FN and one FP but its pins still score.
Confusion count_confusion(const Netlist& gt, const Netlist& pred, const NameMap& net_map, const NameMap& comp_map);

// Degenerate denominators score 1; f1 is 0 when precision + recall is 0.
Scores f1_from_counts(long tp, long fp, long fn);

inline constexpr std::uint64_t kDefaultNodeBudget = 1'000'000;

// Maximises F1 over partial injective net renamings. For each candidate net
// map components are paired by maximum-weight matching. The search is exact
// branch-and-bound within `budget` nodes, else a signature-greedy heuristic
// with alternating refinement (exact = false).
EvalReport best_permutation_score(const Netlist& gt, const Netlist& pred, std::uint64_t budget = kDefaultNodeBudget);

std::string report_json(const EvalReport& r);
std::string report_text(const EvalReport& r);

}  // namespace netlift
