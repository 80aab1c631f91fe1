#include "netlift/batch.hpp"

#include <chrono>

#include <fmt/format.h>
#include <omp.h>

#include "netlift/evaluate.hpp"
#include "netlift/log.hpp"
#include "netlift/spectre.hpp"

namespace netlift {

namespace {

BatchRow run_one(const ManifestEntry& e, const std::filesystem::path& root, const BatchOptions& opts) {
  BatchRow row;
  row.name = e.name;
  row.difficulty = e.difficulty;
  try {
    const GrayImage img = load_image(root / e.image);
    const DetectionsDoc det = load_detections(root / e.detections);
    const Netlist truth = load_spectre(root / e.truth);
    PipelineConfig cfg = opts.pipeline;
    cfg.exec = Exec::Serial;  // parallelism is across circuits
    if (opts.use_ignore_regions && !e.ignore_regions.empty()) {
      const auto regs = load_ignore_regions(root / e.ignore_regions);
      cfg.ignore_regions.insert(cfg.ignore_regions.end(), regs.begin(), regs.end());
    }
    const auto t0 = std::chrono::steady_clock::now();
    const PipelineResult r = run_pipeline(img, det, cfg);
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    row.warnings = static_cast<int>(r.warnings.size());
    if (!opts.out_dir.empty()) save_spectre(r.netlist, opts.out_dir / (e.name + ".scs"));
    const EvalReport rep = best_permutation_score(truth, r.netlist);
    row.f1 = rep.f1;
    row.exact = rep.exact;
  } catch (const std::exception& ex) {
    row.f1 = 0;
    row.reason = ex.what();
  }
  return row;
}

}  // namespace

BatchSummary run_batch(const std::filesystem::path& manifest_path, const BatchOptions& opts) {
  const Manifest m = load_manifest(manifest_path);
  const auto root = manifest_path.parent_path();
  if (!opts.out_dir.empty()) std::filesystem::create_directories(opts.out_dir);
  BatchSummary s;
  s.rows.resize(m.circuits.size());
  const int n = static_cast<int>(m.circuits.size());
  const int jobs = opts.jobs > 0 ? opts.jobs : omp_get_num_procs();
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs) if (jobs > 1)
  for (int i = 0; i < n; ++i) s.rows[i] = run_one(m.circuits[i], root, opts);

  for (Difficulty d : {Difficulty::Easy, Difficulty::Medium, Difficulty::Hard}) {
    SplitSummary sp;
    sp.difficulty = d;
    double sum = 0;
    for (const auto& r : s.rows) {
      if (r.difficulty != d) continue;
      ++sp.circuits;
      sp.perfect += r.f1 == 1.0;
      sum += r.f1;
    }
    if (sp.circuits == 0) continue;
    sp.mean_f1 = sum / sp.circuits;
    s.splits.push_back(sp);
  }
  for (const auto& r : s.rows) {
    log(LogLevel::Info, fmt::format("{} f1={:.4f} {:.3f}s{}", r.name, r.f1, r.seconds, r.reason.empty() ? "" : " " + r.reason));
  }
  return s;
}

std::string format_summary(const BatchSummary& s) {
  std::string out = fmt::format("{:<10} {:>8} {:>8} {:>8}\n", "split", "circuits", "perfect", "mean_f1");
  for (const auto& sp : s.splits) {
    out += fmt::format("{:<10} {:>8} {:>8} {:>8.4f}\n", to_string(sp.difficulty), sp.circuits, sp.perfect, sp.mean_f1);
  }
  for (const auto& r : s.rows) {
    if (!r.reason.empty()) out += fmt::format("failed {}: F1 0 ({})\n", r.name, r.reason);
  }
  return out;
}

}  // namespace netlift
