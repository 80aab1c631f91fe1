#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "netlift/connectivity.hpp"
#include "netlift/geometry.hpp"
#include "netlift/netlist.hpp"
#include "netlift/raster.hpp"
#include "netlift/schematic.hpp"

namespace netlift {

enum class Difficulty { Easy, Medium, Hard };

std::string_view to_string(Difficulty d);
Difficulty difficulty_from_string(std::string_view s);

struct SynthConfig {
  std::uint64_t seed = 0;
  int min_elements = 3;
  int max_elements = 8;
  Size canvas{640, 640};
  int stroke = 3;
  Difficulty difficulty = Difficulty::Easy;
  bool markings = false;
  int min_markings = 2;
  int max_markings = 6;

  // Element count, canvas and marking defaults for a difficulty split.
  static SynthConfig preset(Difficulty d, std::uint64_t seed, bool markings = false);
};

struct GroundTruth {
  DetectionsDoc detections;
  BitMask wire_mask;     // binarized wire ink, element boxes removed
  LabelMap net_pixels;   // label = net index + 1, matching `netlist` naming
  Netlist netlist;
  SchematicDoc schematic;
  std::vector<BBox> marking_boxes;
};

struct SynthResult {
  GrayImage image;
  GroundTruth truth;
};

// Deterministic in the config. Throws ValidationError when the circuit
// cannot be placed and routed within the retry budget.
SynthResult generate(const SynthConfig& config);

// Overlays 1-px rectangle outlines and pseudo-text. Rectangle edges lie on
// half-grid lines, never meet an element box grown by 2 px, and are only
// kept when erasing them as outline ignore regions restores the clean wire
// mask exactly.
std::vector<BBox> add_markings(GrayImage& img, const GroundTruth& gt, const SynthConfig& config, std::uint64_t seed);

// h x w block-average then nearest-neighbour upscale by 2.
GrayImage degrade_resolution(const GrayImage& img);

struct ManifestEntry {
  std::string name;
  std::uint64_t seed = 0;
  Difficulty difficulty = Difficulty::Easy;
  bool markings = false;
  std::string image, detections, truth, mask, schematic, ignore_regions;  // relative to the manifest

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct Manifest {
  std::vector<ManifestEntry> circuits;

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

// Writes <name>/{image.pgm, detections.json, truth.scs, mask.pbm,
// schematic.json[, markings.json]} per config plus manifest.json.
Manifest emit_corpus(const std::vector<SynthConfig>& configs, const std::filesystem::path& out_dir, int jobs = 0);

Manifest load_manifest(const std::filesystem::path& path);
void save_manifest(const Manifest& m, const std::filesystem::path& path);

}  // namespace netlift
