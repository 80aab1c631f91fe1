#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "netlift/connectivity.hpp"
#include "netlift/geometry.hpp"

namespace netlift {

struct SchematicNet {
  std::string name;
  std::vector<Segment> segments;

  friend bool operator==(const SchematicNet&, const SchematicNet&) = default;
};

struct SchematicBinding {
  std::string element_id;
  std::string pin_name;
  std::string net_name;

  friend bool operator==(const SchematicBinding&, const SchematicBinding&) = default;
};

// One entry in `nets` per net region; regions merged by naming (several
// ground wires) share a name.
struct SchematicDoc {
  Size canvas;
  std::vector<ElementDetection> elements;
  std::vector<SchematicNet> nets;
  std::vector<SchematicBinding> bindings;

  friend bool operator==(const SchematicDoc&, const SchematicDoc&) = default;
};

// `names` maps net label to net name; every net in `nets` must have one.
SchematicDoc build_schematic(Size canvas, std::span<const ElementDetection> dets, std::span<const NetGeometry> nets,
                             const std::map<int, std::string>& names, std::span<const NetBinding> bindings);

// Throws ValidationError when a binding names an unknown element or net.
void validate(const SchematicDoc& doc);

std::string render_svg(const SchematicDoc& doc);

std::string dump_schematic(const SchematicDoc& doc);
// Schema violations raise FormatError naming the offending field path.
SchematicDoc parse_schematic(const std::string& text);
void save_schematic(const SchematicDoc& doc, const std::filesystem::path& path);
SchematicDoc load_schematic(const std::filesystem::path& path);

}  // namespace netlift
