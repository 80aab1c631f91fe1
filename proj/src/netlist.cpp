#include "netlift/netlist.hpp"

#include <algorithm>
#include <cctype>

#include "netlift/pin_table.hpp"

namespace netlift {

bool natural_less(std::string_view a, std::string_view b) {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
    const bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
    if (da && db) {
      std::size_t ie = i;
      std::size_t je = j;
      while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
      while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
      // strip leading zeros, then compare by length and digits
      std::size_t is = i;
      std::size_t js = j;
      while (is + 1 < ie && a[is] == '0') ++is;
      while (js + 1 < je && b[js] == '0') ++js;
      if (ie - is != je - js) return ie - is < je - js;
      const int c = a.substr(is, ie - is).compare(b.substr(js, je - js));
      if (c != 0) return c < 0;
      if (ie - i != je - j) return ie - i < je - j;
      i = ie;
      j = je;
      continue;
    }
    if (a[i] != b[j]) return a[i] < b[j];
    ++i;
    ++j;
  }
  return a.size() - i < b.size() - j;
}

bool is_ground_alias(std::string_view net) { return net == "0" || net == "GND" || net == "VSS"; }

bool is_power_name(std::string_view net) { return net.substr(0, 3) == "VDD"; }

void canonicalize(Netlist& n) {
  std::sort(n.components.begin(), n.components.end(),
            [](const Component& a, const Component& b) { return natural_less(a.name, b.name); });
  n.nets.clear();
  n.ground_names.clear();
  n.power_names.clear();
  for (const auto& c : n.components) {
    for (const auto& p : c.pins) n.nets.insert(p);
  }
  for (const auto& net : n.nets) {
    if (is_ground_alias(net)) n.ground_names.insert(net);
    if (is_power_name(net)) n.power_names.insert(net);
  }
}

void validate(const Netlist& n) {
  std::set<std::string> names;
  for (const auto& c : n.components) {
    if (is_symbol(c.etype)) {
      throw ValidationError("component " + c.name + " has symbol type " + std::string(to_string(c.etype)));
    }
    if (!names.insert(c.name).second) throw ValidationError("duplicate component name " + c.name);
    const auto expected = PinTable::builtin().pin_count(c.etype);
    if (c.pins.size() != expected) {
      throw ValidationError("component " + c.name + " (" + std::string(to_string(c.etype)) + ") has " +
                            std::to_string(c.pins.size()) + " pins, expected " + std::to_string(expected));
    }
    for (const auto& p : c.pins) {
      if (!n.nets.contains(p)) throw ValidationError("component " + c.name + " references undeclared net " + p);
    }
  }
  for (const auto& g : n.ground_names) {
    if (!n.nets.contains(g)) throw ValidationError("ground name " + g + " is not a net");
  }
  for (const auto& g : n.power_names) {
    if (!n.nets.contains(g)) throw ValidationError("power name " + g + " is not a net");
  }
}

}  // namespace netlift
