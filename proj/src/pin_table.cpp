#include "netlift/pin_table.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "netlift/error.hpp"

namespace netlift {

namespace {

void make_builtin_specs(std::map<ElementType, PinSpec>& specs) {
  const std::vector<PinAnchor> two{{"p", 0.5, 0.0}, {"n", 0.5, 1.0}};
  const std::vector<PinAnchor> mos{{"d", 1.0, 0.25}, {"g", 0.0, 0.5}, {"s", 1.0, 0.75}, {"b", 1.0, 0.5}};
  const std::vector<PinAnchor> amp{{"inp", 0.0, 0.25}, {"inn", 0.0, 0.75}, {"out", 1.0, 0.5}};
  const std::vector<PinAnchor> one{{"t", 0.5, 0.0}};
  for (ElementType t : kAllElementTypes) {
    PinSpec s{t, {}};
    switch (t) {
      case ElementType::NMOS:
      case ElementType::PMOS: s.pins = mos; break;
      case ElementType::OpAmp: s.pins = amp; break;
      case ElementType::Gnd:
      case ElementType::Vdd:
      case ElementType::Port: s.pins = one; break;
      default: s.pins = two; break;
    }
    specs[t] = s;
  }

}

}  // namespace

const PinTable& PinTable::builtin() {
  static const PinTable table = [] {
    PinTable t;
    make_builtin_specs(t.specs_);
    return t;
  }();
  return table;
}

PinTable PinTable::load_override(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open pin table " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("pin table " + path.string() + ": " + e.what());
  }
  if (!doc.is_object()) throw FormatError("pin table must be a JSON object keyed by element type");
  PinTable table = builtin();
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const ElementType t = element_type_from_string(it.key());
    if (!it.value().is_array()) throw FormatError("pin table entry '" + it.key() + "' must be an array");
    PinSpec spec{t, {}};
    for (const auto& p : it.value()) {
      PinAnchor a;
      try {
        a.name = p.at("name").get<std::string>();
        a.u = p.at("u").get<double>();
        a.v = p.at("v").get<double>();
      } catch (const nlohmann::json::exception& e) {
        throw FormatError("pin table entry '" + it.key() + "': " + e.what());
      }
      if (a.u < 0 || a.u > 1 || a.v < 0 || a.v > 1) {
        throw FormatError("pin table entry '" + it.key() + "': anchor outside [0,1]");
      }
      spec.pins.push_back(a);
    }
    if (spec.pins.size() != builtin().pin_count(t)) {
      throw FormatError("pin table entry '" + it.key() + "' must keep " +
                        std::to_string(builtin().pin_count(t)) + " terminals");
    }
    table.specs_[t] = spec;
  }
  return table;
}

const PinSpec& PinTable::spec(ElementType t) const {
  auto it = specs_.find(t);
  if (it == specs_.end()) throw ValidationError("no pin spec for " + std::string(to_string(t)));
  return it->second;
}

int PinTable::bulk_index(ElementType t) {
  return (t == ElementType::NMOS || t == ElementType::PMOS) ? 3 : -1;
}

}  // namespace netlift
