#include "netlift/pipeline.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "netlift/log.hpp"
#include "netlift/vectorize.hpp"

namespace netlift {

void validate(const PipelineConfig& c) {
  if (c.margin < 0 || c.snap < 0 || c.stroke_override < 0) {
    throw ValidationError("pixel parameters must be >= 0");
  }
  if (c.threshold.mode == ThresholdSpec::Mode::Fixed && (c.threshold.level < 0 || c.threshold.level > 255)) {
    throw ValidationError("threshold must be in 0..255");
  }
  if (!(c.turn_tolerance > 0 && c.turn_tolerance < 180)) throw ValidationError("turn tolerance must be in (0, 180)");
}

namespace {

template <class Fn>
auto stage(const char* name, Fn&& fn) {
  try {
    log(LogLevel::Debug, fmt::format("stage {}", name));
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

}  // namespace

PipelineResult run_pipeline(const GrayImage& image, const DetectionsDoc& det, const PipelineConfig& cfg) {
  stage("config", [&] {
    validate(cfg);
    if (image.width != det.width || image.height != det.height) {
      throw ValidationError(fmt::format("detections are for a {}x{} image but the image is {}x{}", det.width,
                                        det.height, image.width, image.height));
    }
    return 0;
  });
  const PinTable& table = cfg.table ? *cfg.table : PinTable::builtin();
  PipelineResult out;

  out.wire_mask = stage("raster-io", [&] {
    GrayImage src = image;
    if (cfg.invert) {
      for (auto& v : src.values) v = static_cast<std::uint8_t>(255 - v);
    }
    BitMask m = binarize(src, cfg.threshold, cfg.exec);
    if (!cfg.ignore_regions.empty()) m = apply_ignore_regions(m, cfg.ignore_regions);
    std::vector<BBox> boxes;
    for (const auto& e : det.elements) boxes.push_back(e.bbox);
    return subtract_regions(m, boxes, cfg.margin);
  });

  const LabelMap raw = stage("net-extraction", [&] {
    out.stroke = cfg.stroke_override > 0 ? cfg.stroke_override : estimate_stroke(out.wire_mask);
    return connected_components(out.wire_mask);
  });

  std::vector<CrossPoint> crosses = det.crosspoints;
  if (crosses.empty() && cfg.infer_crossings) {
    crosses = stage("vectorize", [&] { return infer_crosspoints(out.wire_mask, skeletonize(out.wire_mask, cfg.exec)); });
    log(LogLevel::Info, fmt::format("inferred {} cross points", crosses.size()));
  }

  stage("net-extraction", [&] {
    auto res = resolve_crossings(raw, crosses, out.stroke);
    out.labels = std::move(res.labels);
    out.resolutions = std::move(res.resolutions);
    for (const auto& r : out.resolutions) {
      if (r.degraded) {
        out.warnings.push_back(fmt::format("degraded crossing at ({}, {}): {}", r.at.x, r.at.y, r.note));
      }
    }
    return 0;
  });

  out.nets = stage("vectorize", [&] {
    VectorizeOptions vo;
    vo.turn_tolerance_deg = cfg.turn_tolerance;
    vo.exec = cfg.exec;
    return vectorize_nets(out.labels, vo);
  });

  std::vector<NetBinding> bound;
  stage("connectivity", [&] {
    std::vector<PinInstance> pins;
    for (const auto& e : det.elements) {
      auto p = pin_positions(e, table);
      pins.insert(pins.end(), p.begin(), p.end());
    }
    auto b = assign_nets(pins, out.nets, cfg.snap);
    bound = std::move(b.bound);
    out.unbound = std::move(b.unbound);
    Assembly a = assemble_netlist(det.elements, bound, {}, table);
    for (auto& w : a.warnings) out.warnings.push_back(std::move(w));
    out.net_names = std::move(a.net_names);
    out.netlist = std::move(a.netlist);
    return 0;
  });

  stage("netlist-format", [&] {
    validate(out.netlist);
    return 0;
  });

  out.schematic = stage("reconstruct", [&] {
    // Floating wire regions carry no name and are left out.
    std::vector<NetGeometry> named;
    for (const auto& n : out.nets) {
      if (out.net_names.contains(n.label)) named.push_back(n);
    }
    return build_schematic({image.width, image.height}, det.elements, named, out.net_names, bound);
  });
  for (const auto& w : out.warnings) log(LogLevel::Warn, w);
  return out;
}

std::string dump_net_geometry(const PipelineResult& r) {
  using nlohmann::json;
  auto pts = [](const std::vector<Point>& v) {
    json a = json::array();
    for (const auto& p : v) a.push_back({p.x, p.y});
    return a;
  };
  json j;
  j["width"] = r.labels.width();
  j["height"] = r.labels.height();
  j["stroke"] = r.stroke;
  j["nets"] = json::array();
  for (const auto& n : r.nets) {
    auto it = r.net_names.find(n.label);
    json segs = json::array();
    for (const auto& s : n.segments) segs.push_back({s.a().x, s.a().y, s.b().x, s.b().y});
    j["nets"].push_back({{"label", n.label},
                         {"name", it == r.net_names.end() ? json() : json(it->second)},
                         {"pixel_count", n.pixel_count},
                         {"segments", segs},
                         {"ends", pts(n.ends)},
                         {"branches", pts(n.branches)},
                         {"turns", pts(n.turns)}});
  }
  j["crossings"] = json::array();
  for (const auto& c : r.resolutions) {
    j["crossings"].push_back(
        {{"x", c.at.x}, {"y", c.at.y}, {"radius", c.radius}, {"stubs", c.stubs.size()}, {"degraded", c.degraded}});
  }
  return j.dump(1) + "\n";
}

}  // namespace netlift
