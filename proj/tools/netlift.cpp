#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <omp.h>

#include "netlift/batch.hpp"
#include "netlift/evaluate.hpp"
#include "netlift/exec.hpp"
#include "netlift/log.hpp"
#include "netlift/pipeline.hpp"
#include "netlift/schematic.hpp"
#include "netlift/spectre.hpp"
#include "netlift/synth.hpp"

namespace fs = std::filesystem;
using namespace netlift;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitWarn = 2;

struct PipelineFlags {
  std::string threshold = "128";
  int margin = 2;
  double snap = kDefaultSnap;
  int stroke = 0;
  double turn_tol = 30.0;
  bool infer = false;
  bool invert = false;
  std::string ignore_regions;
  std::string pins;

  void attach(CLI::App* app) {
    app->add_option("--threshold", threshold, "Fixed level 0..255 or 'otsu'")->capture_default_str();
    app->add_option("--margin", margin, "Element box growth before subtraction (px)")->capture_default_str();
    app->add_option("--snap", snap, "Maximum pin-to-wire distance (px)")->capture_default_str();
    app->add_option("--stroke", stroke, "Stroke width override, 0 = estimate (px)");
    app->add_option("--turn-tol", turn_tol, "Turn detection tolerance (degrees)")->capture_default_str();
    app->add_flag("--infer-crossings", infer, "Infer cross points when detections list none");
    app->add_flag("--invert", invert, "Image has light ink on a dark background");
    app->add_option("--ignore-regions", ignore_regions, "JSON file of regions to erase before extraction");
    app->add_option("--pins", pins, "JSON pin table override");
  }
};

// Stage-tagged failure for errors raised outside the pipeline proper.
[[noreturn]] void fail(const std::string& stage, const std::exception& e) { throw StageError(stage, e.what()); }

ThresholdSpec parse_threshold(const std::string& s) {
  if (s == "otsu") return ThresholdSpec::otsu();
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw ValidationError("--threshold expects an integer or 'otsu', got '" + s + "'");
  return ThresholdSpec::fixed(v);
}

PipelineConfig make_config(const PipelineFlags& f, std::optional<PinTable>& table_storage) {
  PipelineConfig c;
  try {
    c.threshold = parse_threshold(f.threshold);
    c.margin = f.margin;
    c.snap = f.snap;
    c.stroke_override = f.stroke;
    c.turn_tolerance = f.turn_tol;
    c.infer_crossings = f.infer;
    c.invert = f.invert;
    if (!f.ignore_regions.empty()) c.ignore_regions = load_ignore_regions(f.ignore_regions);
    if (!f.pins.empty()) {
      table_storage = PinTable::load_override(f.pins);
      c.table = &*table_storage;
    }
    validate(c);
  } catch (const std::exception& e) {
    fail("config", e);
  }
  return c;
}

int cmd_extract(const std::string& image_path, const std::string& det_path, const fs::path& out,
                const PipelineFlags& flags) {
  std::optional<PinTable> table;
  const PipelineConfig cfg = make_config(flags, table);
  GrayImage img;
  DetectionsDoc det;
  try {
    img = load_image(image_path);
  } catch (const std::exception& e) {
    fail("raster-io", e);
  }
  try {
    det = load_detections(det_path);
  } catch (const std::exception& e) {
    fail("connectivity", e);
  }
  const PipelineResult r = run_pipeline(img, det, cfg);
  try {
    fs::create_directories(out);
    save_spectre(r.netlist, out / "netlist.scs");
    save_schematic(r.schematic, out / "schematic.json");
    FILE* f = std::fopen((out / "schematic.svg").c_str(), "wb");
    if (!f) throw IoError("cannot write " + (out / "schematic.svg").string());
    const std::string svg = render_svg(r.schematic);
    std::fwrite(svg.data(), 1, svg.size(), f);
    std::fclose(f);
    FILE* g = std::fopen((out / "nets.json").c_str(), "wb");
    if (!g) throw IoError("cannot write " + (out / "nets.json").string());
    const std::string nets = dump_net_geometry(r);
    std::fwrite(nets.data(), 1, nets.size(), g);
    std::fclose(g);
  } catch (const std::exception& e) {
    fail("write", e);
  }
  std::cout << fmt::format("{} components, {} nets -> {}\n", r.netlist.components.size(), r.net_names.size(),
                           out.string());
  return r.warnings.empty() ? kExitOk : kExitWarn;
}

int cmd_eval(const std::string& gt_path, const std::string& pred_path, const std::string& out) {
  Netlist gt, pred;
  try {
    gt = load_spectre(gt_path);
    pred = load_spectre(pred_path);
  } catch (const std::exception& e) {
    fail("netlist-format", e);
  }
  EvalReport rep;
  try {
    rep = best_permutation_score(gt, pred);
  } catch (const std::exception& e) {
    fail("evaluate", e);
  }
  std::cout << report_text(rep);
  if (!out.empty()) {
    try {
      fs::create_directories(out);
      FILE* f = std::fopen((fs::path(out) / "report.json").c_str(), "wb");
      if (!f) throw IoError("cannot write report.json in " + out);
      const std::string j = report_json(rep);
      std::fwrite(j.data(), 1, j.size(), f);
      std::fclose(f);
    } catch (const std::exception& e) {
      fail("write", e);
    }
  } else {
    std::cout << report_json(rep);
  }
  return kExitOk;
}

struct SynthFlags {
  int count = 10;
  std::string difficulty = "easy";
  std::string mix;
  std::uint64_t seed = 0;
  bool markings = false;
  int stroke = 3;
};

int cmd_synth(const SynthFlags& f, const fs::path& out, int jobs) {
  std::vector<SynthConfig> configs;
  try {
    std::vector<std::pair<Difficulty, int>> plan;
    if (!f.mix.empty()) {
      // easy:medium:hard counts
      int e = 0, m = 0, h = 0;
      char tail = 0;
      if (std::sscanf(f.mix.c_str(), "%d:%d:%d%c", &e, &m, &h, &tail) != 3 || e < 0 || m < 0 || h < 0) {
        throw ValidationError("--mix expects E:M:H counts, got '" + f.mix + "'");
      }
      plan = {{Difficulty::Easy, e}, {Difficulty::Medium, m}, {Difficulty::Hard, h}};
    } else {
      if (f.count < 0) throw ValidationError("--count must be >= 0");
      plan = {{difficulty_from_string(f.difficulty), f.count}};
    }
    std::uint64_t seed = f.seed;
    for (auto [d, n] : plan) {
      for (int i = 0; i < n; ++i) {
        SynthConfig c = SynthConfig::preset(d, seed++, f.markings);
        c.stroke = f.stroke;
        configs.push_back(c);
      }
    }
  } catch (const std::exception& e) {
    fail("config", e);
  }
  Manifest m;
  try {
    m = emit_corpus(configs, out, jobs);
  } catch (const std::exception& e) {
    fail("synth", e);
  }
  int code = kExitOk;
  for (const auto& e : m.circuits) {
    if (!e.markings) continue;
    if (load_ignore_regions(out / e.ignore_regions).empty()) {
      log(LogLevel::Warn, e.name + ": no marking rectangle fit the layout");
      code = kExitWarn;
    }
  }
  std::cout << fmt::format("{} circuits -> {}\n", m.circuits.size(), (out / "manifest.json").string());
  return code;
}

int cmd_batch(const std::string& manifest, const PipelineFlags& flags, bool skip_ignore, const std::string& out,
              int jobs) {
  std::optional<PinTable> table;
  BatchOptions opts;
  opts.pipeline = make_config(flags, table);
  opts.use_ignore_regions = !skip_ignore;
  opts.jobs = jobs;
  if (!out.empty()) opts.out_dir = out;
  BatchSummary s;
  try {
    s = run_batch(manifest, opts);
  } catch (const std::exception& e) {
    fail("batch", e);
  }
  std::cout << format_summary(s);
  for (const auto& r : s.rows) {
    if (!r.reason.empty()) return kExitWarn;
  }
  return kExitOk;
}

int cmd_render(const std::string& in, const std::string& out) {
  SchematicDoc doc;
  try {
    doc = load_schematic(in);
  } catch (const std::exception& e) {
    fail("reconstruct", e);
  }
  const std::string svg = render_svg(doc);
  if (out.empty() || out == "-") {
    std::cout << svg;
    return kExitOk;
  }
  FILE* f = std::fopen(out.c_str(), "wb");
  if (!f) fail("write", IoError("cannot write " + out));
  std::fwrite(svg.data(), 1, svg.size(), f);
  std::fclose(f);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"netlift: schematic image to netlist extraction"};
  app.require_subcommand(1);
  int jobs = 0;
  app.add_option("--jobs", jobs, "Worker threads (default: logical CPUs)");

  PipelineFlags pflags;
  std::string image, detections, out = ".";
  auto* extract = app.add_subcommand("extract", "Extract a netlist from one schematic image");
  extract->add_option("image", image, "PGM or PNG image")->required();
  extract->add_option("--detections,-d", detections, "Element detections JSON")->required();
  extract->add_option("--out,-o", out, "Output directory")->capture_default_str();
  pflags.attach(extract);

  std::string gt, pred, eval_out;
  auto* eval = app.add_subcommand("eval", "Best-permutation F1 of a predicted netlist");
  eval->add_option("truth", gt, "Reference netlist (.scs)")->required();
  eval->add_option("pred", pred, "Predicted netlist (.scs)")->required();
  eval->add_option("--out,-o", eval_out, "Directory for report.json (default: print JSON)");

  SynthFlags sflags;
  std::string synth_out = "corpus";
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus with ground truth");
  synth->add_option("--count,-n", sflags.count, "Circuits to generate")->capture_default_str();
  synth->add_option("--difficulty", sflags.difficulty, "easy, medium or hard")->capture_default_str();
  synth->add_option("--mix", sflags.mix, "Per-difficulty counts E:M:H (overrides --count/--difficulty)");
  synth->add_option("--seed", sflags.seed, "First seed; circuit i uses seed + i")->capture_default_str();
  synth->add_flag("--markings", sflags.markings, "Overlay mocked markings");
  synth->add_option("--stroke", sflags.stroke, "Wire stroke width (px)")->capture_default_str();
  synth->add_option("--out,-o", synth_out, "Corpus directory")->capture_default_str();

  PipelineFlags bflags;
  std::string manifest, batch_out;
  bool skip_ignore = false;
  auto* batch = app.add_subcommand("batch", "Extract and score every circuit of a manifest");
  batch->add_option("manifest", manifest, "manifest.json from synth")->required();
  batch->add_flag("--skip-ignore-regions", skip_ignore, "Do not pass the circuits' markings files to the extractor");
  batch->add_option("--out,-o", batch_out, "Directory for predicted netlists");
  bflags.attach(batch);

  std::string render_in, render_out;
  auto* render = app.add_subcommand("render", "Render a schematic document as SVG");
  render->add_option("schematic", render_in, "schematic.json")->required();
  render->add_option("--out,-o", render_out, "SVG path (default: stdout)");

  // Accept --jobs after the subcommand too.
  for (auto* sub : {extract, synth, batch}) sub->add_option("--jobs", jobs, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  if (jobs < 0) {
    std::cerr << "error: config: --jobs must be >= 0\n";
    return kExitError;
  }
  if (jobs > 0) set_thread_count(jobs);
  try {
    if (*extract) return cmd_extract(image, detections, out, pflags);
    if (*eval) return cmd_eval(gt, pred, eval_out);
    if (*synth) return cmd_synth(sflags, synth_out, jobs);
    if (*batch) return cmd_batch(manifest, bflags, skip_ignore, batch_out, jobs);
    if (*render) return cmd_render(render_in, render_out);
  } catch (const StageError& e) {
    log(LogLevel::Error, e.what());
    return kExitError;
  } catch (const std::exception& e) {
    log(LogLevel::Error, std::string("internal: ") + e.what());
    return kExitError;
  }
  return kExitError;
}
