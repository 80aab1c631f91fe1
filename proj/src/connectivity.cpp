#include "netlift/connectivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <nlohmann/json.hpp>

#include "file_util.hpp"
#include "netlift/error.hpp"

namespace netlift {

std::pair<double, double> anchor_to_image(const BBox& box, Rotation r, double u, double v) {
  const double cx = (box.min().x + box.max().x) / 2.0;
  const double cy = (box.min().y + box.max().y) / 2.0;
  const int q = quarter_turns(r.angle);
  const double w = q % 2 == 0 ? box.width() : box.height();
  const double h = q % 2 == 0 ? box.height() : box.width();
  if (r.mirrored) u = 1.0 - u;
  double dx = (u - 0.5) * w;
  double dy = (v - 0.5) * h;
  for (int i = 0; i < q; ++i) {
    const double t = dx;
    dx = -dy;
    dy = t;
  }
  return {cx + dx, cy + dy};
}

std::vector<PinInstance> pin_positions(const ElementDetection& det, const PinTable& table) {
  std::vector<PinInstance> out;
  for (const auto& a : table.spec(det.etype).pins) {
    const auto [x, y] = anchor_to_image(det.bbox, det.rotation, a.u, a.v);
    out.push_back({det.id, a.name, {static_cast<int>(std::lround(x)), static_cast<int>(std::lround(y))}});
  }
  return out;
}

Bindings assign_nets(std::span<const PinInstance> pins, std::span<const NetGeometry> nets, double snap) {
  std::vector<const NetGeometry*> order;
  for (const auto& n : nets) order.push_back(&n);
  std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->label < b->label; });
  Bindings out;
  for (const auto& p : pins) {
    double best = std::numeric_limits<double>::infinity();
    int label = 0;
    for (const auto* n : order) {
      const double d = distance_to_net(p.at, *n);
      if (d < best) {
        best = d;
        label = n->label;
      }
    }
    if (label != 0 && best <= snap) {
      out.bound.push_back({p, label, best});
    } else {
      out.unbound.push_back(p);
    }
  }
  return out;
}

std::string_view component_prefix(ElementType t) {
  switch (t) {
    case ElementType::NMOS:
    case ElementType::PMOS:
      return "M";
    case ElementType::Resistor:
      return "R";
    case ElementType::Capacitor:
      return "C";
    case ElementType::Inductor:
      return "L";
    case ElementType::Diode:
      return "D";
    case ElementType::VSource:
      return "V";
    case ElementType::ISource:
      return "I";
    case ElementType::OpAmp:
      return "X";
    case ElementType::Gnd:
    case ElementType::Vdd:
    case ElementType::Port:
      break;
  }
  throw ValidationError("symbol " + std::string(to_string(t)) + " has no component prefix");
}

Assembly assemble_netlist(std::span<const ElementDetection> dets, std::span<const NetBinding> bindings,
                          const NamingPolicy& policy, const PinTable& table) {
  Assembly out;
  std::map<std::pair<std::string, std::string>, int> label_of;  // (element, pin) -> label
  for (const auto& b : bindings) label_of.try_emplace({b.pin.element_id, b.pin.pin_name}, b.net_label);

  auto symbol_label = [&](const ElementDetection& d) -> int {
    const auto& pin = table.spec(d.etype).pins.at(0).name;
    auto it = label_of.find({d.id, pin});
    if (it == label_of.end()) {
      out.warnings.push_back(std::string(to_string(d.etype)) + " symbol " + d.id + " is not attached to any net");
      return 0;
    }
    return it->second;
  };

  std::set<std::string> used;
  auto claim = [&](int label, const std::string& name) {
    if (label == 0 || out.net_names.contains(label)) return;
    out.net_names[label] = name;
    used.insert(name);
  };
  for (const auto& d : dets) {
    if (d.etype == ElementType::Gnd) claim(symbol_label(d), "0");
  }
  int vdd_count = 0;
  for (const auto& d : dets) {
    if (d.etype != ElementType::Vdd) continue;
    const int l = symbol_label(d);
    if (l == 0 || out.net_names.contains(l)) continue;
    ++vdd_count;
    claim(l, vdd_count == 1 ? std::string("VDD") : "VDD" + std::to_string(vdd_count));
  }
  for (const auto& d : dets) {
    if (d.etype != ElementType::Port) continue;
    const int l = symbol_label(d);
    if (l != 0 && !out.net_names.contains(l) && used.contains(d.id)) {
      out.warnings.push_back("port " + d.id + " name already used by another net");
      continue;
    }
    claim(l, d.id);
  }

  std::set<int> unnamed;
  for (const auto& d : dets) {
    if (is_symbol(d.etype)) continue;
    for (const auto& p : table.spec(d.etype).pins) {
      auto it = label_of.find({d.id, p.name});
      if (it != label_of.end() && !out.net_names.contains(it->second)) unnamed.insert(it->second);
    }
  }
  int counter = 0;
  for (int l : unnamed) {
    std::string name;
    do {
      name = "net" + std::to_string(++counter);
    } while (used.contains(name));
    claim(l, name);
  }

  std::map<std::string, int> ordinal;
  for (const auto& d : dets) {
    if (is_symbol(d.etype)) continue;
    const std::string prefix(component_prefix(d.etype));
    Component c;
    c.name = prefix + std::to_string(++ordinal[prefix]);
    c.etype = d.etype;
    const auto& spec = table.spec(d.etype).pins;
    for (std::size_t i = 0; i < spec.size(); ++i) {
      auto it = label_of.find({d.id, spec[i].name});
      if (it != label_of.end()) {
        c.pins.push_back(out.net_names.at(it->second));
        continue;
      }
      if (policy.default_bulk && static_cast<int>(i) == PinTable::bulk_index(d.etype)) {
        c.pins.push_back(d.etype == ElementType::NMOS ? "0" : "VDD");
        continue;
      }
      throw ValidationError("element " + d.id + " pin " + spec[i].name + " is not connected to any net");
    }
    out.component_names[d.id] = c.name;
    out.netlist.components.push_back(std::move(c));
  }
  canonicalize(out.netlist);
  return out;
}

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw FormatError("detections: " + path + ": " + what);
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) schema_error(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(path.empty() ? key : path + "." + key, "missing field");
  return *it;
}

int int_field(const json& obj, const std::string& key, const std::string& path) {
  const auto& v = field(obj, key, path);
  if (!v.is_number_integer()) schema_error(path.empty() ? key : path + "." + key, "expected an integer");
  return v.get<int>();
}

}  // namespace

DetectionsDoc parse_detections(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("detections: ") + e.what());
  }
  DetectionsDoc out;
  if (!doc.is_object()) schema_error("", "expected an object");
  if (auto it = doc.find("image"); it != doc.end() && it->is_string()) out.image = it->get<std::string>();
  out.width = int_field(doc, "width", "");
  out.height = int_field(doc, "height", "");
  if (out.width <= 0 || out.height <= 0) schema_error("width", "image size must be positive");
  const auto& elements = field(doc, "elements", "");
  if (!elements.is_array()) schema_error("elements", "expected an array");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const std::string path = "elements[" + std::to_string(i) + "]";
    const auto& e = elements[i];
    ElementDetection d;
    const auto& id = field(e, "id", path);
    if (!id.is_string()) schema_error(path + ".id", "expected a string");
    d.id = id.get<std::string>();
    if (!ids.insert(d.id).second) schema_error(path + ".id", "duplicate id '" + d.id + "'");
    const auto& type = field(e, "type", path);
    if (!type.is_string()) schema_error(path + ".type", "expected a string");
    d.etype = element_type_from_string(type.get<std::string>());
    const auto& bb = field(e, "bbox", path);
    if (!bb.is_array() || bb.size() != 4 || !std::all_of(bb.begin(), bb.end(), [](const json& v) {
          return v.is_number_integer();
        })) {
      schema_error(path + ".bbox", "expected [x0,y0,x1,y1] integers");
    }
    try {
      d.bbox = BBox(bb[0].get<int>(), bb[1].get<int>(), bb[2].get<int>(), bb[3].get<int>());
    } catch (const Error& err) {
      schema_error(path + ".bbox", err.what());
    }
    if (d.bbox.min().x < 0 || d.bbox.min().y < 0 || d.bbox.max().x >= out.width || d.bbox.max().y >= out.height) {
      schema_error(path + ".bbox", "outside the image");
    }
    const int rot = e.contains("rotation") ? int_field(e, "rotation", path) : 0;
    try {
      d.rotation.angle = angle_from_degrees(rot);
    } catch (const Error& err) {
      schema_error(path + ".rotation", err.what());
    }
    if (auto it = e.find("mirrored"); it != e.end()) {
      if (!it->is_boolean()) schema_error(path + ".mirrored", "expected a boolean");
      d.rotation.mirrored = it->get<bool>();
    }
    out.elements.push_back(std::move(d));
  }
  if (auto it = doc.find("crosspoints"); it != doc.end()) {
    if (!it->is_array()) schema_error("crosspoints", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string path = "crosspoints[" + std::to_string(i) + "]";
      const auto& c = (*it)[i];
      CrossPoint cp;
      cp.at = {int_field(c, "x", path), int_field(c, "y", path)};
      const auto& kind = field(c, "kind", path);
      const std::string k = kind.is_string() ? kind.get<std::string>() : "";
      if (k == "crossing") {
        cp.kind = CrossKind::Crossing;
      } else if (k == "junction") {
        cp.kind = CrossKind::Junction;
      } else {
        schema_error(path + ".kind", "expected \"crossing\" or \"junction\"");
      }
      out.crosspoints.push_back(cp);
    }
  }
  return out;
}

std::string dump_detections(const DetectionsDoc& doc) {
  json j;
  j["image"] = doc.image;
  j["width"] = doc.width;
  j["height"] = doc.height;
  j["elements"] = json::array();
  for (const auto& e : doc.elements) {
    j["elements"].push_back({{"id", e.id},
                             {"type", std::string(to_string(e.etype))},
                             {"bbox", {e.bbox.min().x, e.bbox.min().y, e.bbox.max().x, e.bbox.max().y}},
                             {"rotation", degrees(e.rotation.angle)},
                             {"mirrored", e.rotation.mirrored}});
  }
  j["crosspoints"] = json::array();
  for (const auto& c : doc.crosspoints) {
    j["crosspoints"].push_back(
        {{"x", c.at.x}, {"y", c.at.y}, {"kind", c.kind == CrossKind::Crossing ? "crossing" : "junction"}});
  }
  return j.dump(1) + "\n";
}

DetectionsDoc load_detections(const std::filesystem::path& path) {
  try {
    return parse_detections(detail::read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void save_detections(const DetectionsDoc& doc, const std::filesystem::path& path) {
  detail::write_file(path, dump_detections(doc));
}

}  // namespace netlift
