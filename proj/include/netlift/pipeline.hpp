#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "netlift/connectivity.hpp"
#include "netlift/exec.hpp"
#include "netlift/net_extraction.hpp"
#include "netlift/netlist.hpp"
#include "netlift/pin_table.hpp"
#include "netlift/raster.hpp"
#include "netlift/schematic.hpp"

namespace netlift {

struct PipelineConfig {
  ThresholdSpec threshold = ThresholdSpec::fixed(128);
  bool invert = false;  // light ink on a dark background
  int margin = 2;       // element boxes grown by this before subtraction
  double snap = kDefaultSnap;
  int stroke_override = 0;  // 0 = estimate from the mask
  double turn_tolerance = 30.0;
  bool infer_crossings = false;
  std::vector<IgnoreRegion> ignore_regions;
  const PinTable* table = nullptr;  // nullptr = built-in
  Exec exec = Exec::Parallel;
};

// Raised by run_pipeline; `stage()` names the failing step.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& msg) : Error(stage + ": " + msg), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct PipelineResult {
  Netlist netlist;
  SchematicDoc schematic;
  BitMask wire_mask;
  LabelMap labels;  // after crossing resolution
  std::vector<NetGeometry> nets;
  std::map<int, std::string> net_names;
  std::vector<CrossingResolution> resolutions;
  std::vector<PinInstance> unbound;
  int stroke = 0;
  std::vector<std::string> warnings;  // non-empty means exit code 2
};

void validate(const PipelineConfig& config);

PipelineResult run_pipeline(const GrayImage& image, const DetectionsDoc& detections, const PipelineConfig& config);

// Net-geometry document: label, name and fitted geometry per net.
std::string dump_net_geometry(const PipelineResult& r);

}  // namespace netlift
