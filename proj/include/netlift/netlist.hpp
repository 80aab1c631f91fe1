#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "netlift/geometry.hpp"

namespace netlift {

struct Component {
  std::string name;
  ElementType etype = ElementType::Resistor;
  std::vector<std::string> pins;  // net names in terminal order

  friend bool operator==(const Component&, const Component&) = default;
};

// Canonical form: components sorted by natural name order, nets holding
// exactly the names referenced by some pin.
struct Netlist {
  std::vector<Component> components;
  std::set<std::string> nets;
  std::set<std::string> ground_names;
  std::set<std::string> power_names;

  friend bool operator==(const Netlist&, const Netlist&) = default;
};

// Name order with embedded integers compared numerically: M2 < M10.
bool natural_less(std::string_view a, std::string_view b);

bool is_ground_alias(std::string_view net);
bool is_power_name(std::string_view net);

// Sorts components, recomputes nets and the ground/power subsets from pins.
void canonicalize(Netlist& n);

// Throws ValidationError when a pin count does not match the pin table,
// a component name repeats, or a symbol type appears as a component.
void validate(const Netlist& n);

}  // namespace netlift
