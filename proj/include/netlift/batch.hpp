#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "netlift/pipeline.hpp"
#include "netlift/synth.hpp"

namespace netlift {

struct BatchOptions {
  PipelineConfig pipeline;
  bool use_ignore_regions = true;  // pass each circuit's markings file to the extractor
  int jobs = 0;                    // <= 0: every logical CPU
  std::filesystem::path out_dir;   // when set, predictions go to <out>/<name>.scs
};

struct BatchRow {
  std::string name;
  Difficulty difficulty = Difficulty::Easy;
  double f1 = 0;
  bool exact = true;
  int warnings = 0;
  std::string reason;  // non-empty when the circuit failed and scored 0
  double seconds = 0;  // extraction time, excluded from the table
};

struct SplitSummary {
  Difficulty difficulty = Difficulty::Easy;
  int circuits = 0;
  int perfect = 0;
  double mean_f1 = 0;
};

struct BatchSummary {
  std::vector<BatchRow> rows;      // manifest order
  std::vector<SplitSummary> splits;  // difficulties present, easy first
};

// Extract and score every circuit of a manifest. Circuits are independent,
// so the result does not depend on `jobs`.
BatchSummary run_batch(const std::filesystem::path& manifest, const BatchOptions& opts);

// Per-difficulty mean F1 table followed by one line per failed circuit.
std::string format_summary(const BatchSummary& s);

}  // namespace netlift
