#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "netlift/geometry.hpp"
#include "netlift/netlist.hpp"
#include "netlift/pin_table.hpp"

namespace netlift {

struct PinInstance {
  std::string element_id;
  std::string pin_name;
  Point at;

  friend bool operator==(const PinInstance&, const PinInstance&) = default;
};

struct NetBinding {
  PinInstance pin;
  int net_label = 0;
  double distance = 0;

  friend bool operator==(const NetBinding&, const NetBinding&) = default;
};

struct Bindings {
  std::vector<NetBinding> bound;
  std::vector<PinInstance> unbound;
};

// Image-space location of anchor (u, v) on the unrotated box of a detection.
// `box` is the detection box as drawn (already rotated): for quarter turns
// the unrotated box has width and height swapped about the same centre.
// Mirroring flips u before rotating clockwise about the centre.
std::pair<double, double> anchor_to_image(const BBox& box, Rotation r, double u, double v);

std::vector<PinInstance> pin_positions(const ElementDetection& det, const PinTable& table = PinTable::builtin());

inline constexpr double kDefaultSnap = 6.0;

// Binds each pin to the nearest net (by true point-to-segment distance)
// within `snap`; ties go to the lower label.
Bindings assign_nets(std::span<const PinInstance> pins, std::span<const NetGeometry> nets, double snap = kDefaultSnap);

struct NamingPolicy {
  // Unbound MOS bulk pins fall back to ground (NMOS) or VDD (PMOS).
  bool default_bulk = true;
};

struct Assembly {
  Netlist netlist;
  std::map<int, std::string> net_names;                // label -> net name
  std::map<std::string, std::string> component_names;  // detection id -> component name
  std::vector<std::string> warnings;
};

// Names nets from symbols and assembles the component list. Throws
// ValidationError for an unbound component pin.
Assembly assemble_netlist(std::span<const ElementDetection> dets, std::span<const NetBinding> bindings,
                          const NamingPolicy& policy = {}, const PinTable& table = PinTable::builtin());

// Single-letter instance prefix per component type ("M", "R", ..., "X").
std::string_view component_prefix(ElementType t);

// The detections document consumed by the extractor.
struct DetectionsDoc {
  std::string image;
  int width = 0;
  int height = 0;
  std::vector<ElementDetection> elements;
  std::vector<CrossPoint> crosspoints;

  friend bool operator==(const DetectionsDoc&, const DetectionsDoc&) = default;
};

// Rejects unknown types, bad rotations, duplicate ids and out-of-image boxes.
DetectionsDoc parse_detections(const std::string& text);
std::string dump_detections(const DetectionsDoc& doc);
DetectionsDoc load_detections(const std::filesystem::path& path);
void save_detections(const DetectionsDoc& doc, const std::filesystem::path& path);

}  // namespace netlift
