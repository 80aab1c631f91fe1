#include "netlift/schematic.hpp"

#include <cmath>
#include <cstdint>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "file_util.hpp"
#include "netlift/error.hpp"
#include "netlift/glyphs.hpp"

namespace netlift {

SchematicDoc build_schematic(Size canvas, std::span<const ElementDetection> dets, std::span<const NetGeometry> nets,
                             const std::map<int, std::string>& names, std::span<const NetBinding> bindings) {
  SchematicDoc doc;
  doc.canvas = canvas;
  doc.elements.assign(dets.begin(), dets.end());
  for (const auto& n : nets) {
    auto it = names.find(n.label);
    if (it == names.end()) throw ValidationError("net label " + std::to_string(n.label) + " has no name");
    doc.nets.push_back({it->second, n.segments});
  }
  for (const auto& b : bindings) {
    auto it = names.find(b.net_label);
    if (it == names.end()) throw ValidationError("binding to net label " + std::to_string(b.net_label) + " has no name");
    doc.bindings.push_back({b.pin.element_id, b.pin.pin_name, it->second});
  }
  validate(doc);
  return doc;
}

void validate(const SchematicDoc& doc) {
  std::set<std::string> ids, nets;
  for (const auto& e : doc.elements) {
    if (!ids.insert(e.id).second) throw ValidationError("schematic: duplicate element id " + e.id);
  }
  for (const auto& n : doc.nets) nets.insert(n.name);
  for (const auto& b : doc.bindings) {
    if (!ids.contains(b.element_id)) throw ValidationError("schematic: binding references unknown element " + b.element_id);
    if (!nets.contains(b.net_name)) throw ValidationError("schematic: binding references unknown net " + b.net_name);
  }
}

namespace {

std::string num(double v) {
  if (std::abs(v) < 0.005) v = 0;
  std::string s = fmt::format("{:.2f}", v);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// FNV-1a of the name spread over a fixed set of readable hues.
std::string net_color(const std::string& name) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : name) {
    h ^= c;
    h *= 16777619u;
  }
  const double hue = (h % 360) / 60.0;
  const double c = 0.65, x = c * (1 - std::abs(std::fmod(hue, 2.0) - 1));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hue)) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  const double m = 0.15;
  auto ch = [&](double v) { return static_cast<int>(std::lround((v + m) * 255)); };
  return fmt::format("#{:02x}{:02x}{:02x}", ch(r), ch(g), ch(b));
}

}  // namespace

std::string render_svg(const SchematicDoc& doc) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n",
      doc.canvas.width, doc.canvas.height);
  for (const auto& e : doc.elements) {
    out += fmt::format("<g class=\"element\" id=\"{}\" data-type=\"{}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1.5\">\n",
                       escape_xml(e.id), to_string(e.etype));
    for (const auto& s : placed_glyph(e)) {
      std::string d;
      for (std::size_t i = 0; i < s.pts.size(); ++i) {
        d += (i == 0 ? "M" : " L") + num(s.pts[i].first) + " " + num(s.pts[i].second);
      }
      if (s.closed) d += " Z";
      out += fmt::format("<path d=\"{}\"{}/>\n", d, s.filled ? " fill=\"#000000\"" : "");
    }
    out += "</g>\n";
  }
  for (const auto& n : doc.nets) {
    const std::string color = net_color(n.name);
    out += fmt::format("<g class=\"net\" data-net=\"{}\" stroke=\"{}\" stroke-width=\"2\" fill=\"none\">\n",
                       escape_xml(n.name), color);
    for (const auto& s : n.segments) {
      out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n", s.a().x, s.a().y, s.b().x, s.b().y);
    }
    if (!n.segments.empty()) {
      const auto& s = n.segments.front();
      out += fmt::format("<text x=\"{}\" y=\"{}\" fill=\"{}\" stroke=\"none\" font-size=\"10\">{}</text>\n",
                         num((s.a().x + s.b().x) / 2.0), num((s.a().y + s.b().y) / 2.0 - 3), color,
                         escape_xml(n.name));
    }
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw FormatError("schematic: " + path + ": " + what);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) schema_error(path.empty() ? "$" : path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(join(path, key), "missing field");
  return *it;
}

const json& array_field(const json& obj, const std::string& key, const std::string& path) {
  const auto& v = field(obj, key, path);
  if (!v.is_array()) schema_error(join(path, key), "expected an array");
  return v;
}

int int_field(const json& obj, const std::string& key, const std::string& path) {
  const auto& v = field(obj, key, path);
  if (!v.is_number_integer()) schema_error(join(path, key), "expected an integer");
  return v.get<int>();
}

std::string str_field(const json& obj, const std::string& key, const std::string& path) {
  const auto& v = field(obj, key, path);
  if (!v.is_string()) schema_error(join(path, key), "expected a string");
  return v.get<std::string>();
}

std::vector<int> ints(const json& v, std::size_t n, const std::string& path) {
  if (!v.is_array() || v.size() != n) schema_error(path, "expected " + std::to_string(n) + " integers");
  std::vector<int> out;
  for (const auto& x : v) {
    if (!x.is_number_integer()) schema_error(path, "expected integers");
    out.push_back(x.get<int>());
  }
  return out;
}

}  // namespace

std::string dump_schematic(const SchematicDoc& doc) {
  json j;
  j["canvas"] = {{"width", doc.canvas.width}, {"height", doc.canvas.height}};
  j["elements"] = json::array();
  for (const auto& e : doc.elements) {
    j["elements"].push_back({{"id", e.id},
                             {"etype", std::string(to_string(e.etype))},
                             {"bbox", {e.bbox.min().x, e.bbox.min().y, e.bbox.max().x, e.bbox.max().y}},
                             {"rotation", degrees(e.rotation.angle)},
                             {"mirrored", e.rotation.mirrored}});
  }
  j["nets"] = json::array();
  for (const auto& n : doc.nets) {
    json segs = json::array();
    for (const auto& s : n.segments) segs.push_back({s.a().x, s.a().y, s.b().x, s.b().y});
    j["nets"].push_back({{"name", n.name}, {"segments", segs}});
  }
  j["bindings"] = json::array();
  for (const auto& b : doc.bindings) {
    j["bindings"].push_back({{"element_id", b.element_id}, {"pin_name", b.pin_name}, {"net_name", b.net_name}});
  }
  return j.dump(1) + "\n";
}

SchematicDoc parse_schematic(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("schematic: ") + e.what());
  }
  SchematicDoc doc;
  const auto& canvas = field(j, "canvas", "");
  doc.canvas = {int_field(canvas, "width", "canvas"), int_field(canvas, "height", "canvas")};
  const auto& elements = array_field(j, "elements", "");
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const std::string path = "elements[" + std::to_string(i) + "]";
    const auto& e = elements[i];
    ElementDetection d;
    d.id = str_field(e, "id", path);
    try {
      d.etype = element_type_from_string(str_field(e, "etype", path));
    } catch (const FormatError& err) {
      if (std::string(err.what()).starts_with("schematic:")) throw;
      schema_error(path + ".etype", err.what());
    }
    const auto bb = ints(field(e, "bbox", path), 4, path + ".bbox");
    try {
      d.bbox = BBox(bb[0], bb[1], bb[2], bb[3]);
      d.rotation.angle = angle_from_degrees(int_field(e, "rotation", path));
    } catch (const Error& err) {
      schema_error(path, err.what());
    }
    const auto& mir = field(e, "mirrored", path);
    if (!mir.is_boolean()) schema_error(path + ".mirrored", "expected a boolean");
    d.rotation.mirrored = mir.get<bool>();
    doc.elements.push_back(std::move(d));
  }
  const auto& nets = array_field(j, "nets", "");
  for (std::size_t i = 0; i < nets.size(); ++i) {
    const std::string path = "nets[" + std::to_string(i) + "]";
    SchematicNet n;
    n.name = str_field(nets[i], "name", path);
    const auto& segs = array_field(nets[i], "segments", path);
    for (std::size_t k = 0; k < segs.size(); ++k) {
      const std::string sp = path + ".segments[" + std::to_string(k) + "]";
      const auto v = ints(segs[k], 4, sp);
      if (v[0] == v[2] && v[1] == v[3]) schema_error(sp, "degenerate segment");
      n.segments.emplace_back(Point{v[0], v[1]}, Point{v[2], v[3]});
    }
    doc.nets.push_back(std::move(n));
  }
  const auto& bindings = array_field(j, "bindings", "");
  for (std::size_t i = 0; i < bindings.size(); ++i) {
    const std::string path = "bindings[" + std::to_string(i) + "]";
    doc.bindings.push_back({str_field(bindings[i], "element_id", path), str_field(bindings[i], "pin_name", path),
                            str_field(bindings[i], "net_name", path)});
  }
  validate(doc);
  return doc;
}

void save_schematic(const SchematicDoc& doc, const std::filesystem::path& path) {
  detail::write_file(path, dump_schematic(doc));
}

SchematicDoc load_schematic(const std::filesystem::path& path) { return parse_schematic(detail::read_file(path)); }

}  // namespace netlift
