#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "netlift/geometry.hpp"

namespace netlift {

// Anchor expressed on the unrotated bounding box, u along x, v along y.
struct PinAnchor {
  std::string name;
  double u = 0.5;
  double v = 0.0;

  friend bool operator==(const PinAnchor&, const PinAnchor&) = default;
};

struct PinSpec {
  ElementType etype = ElementType::Resistor;
  std::vector<PinAnchor> pins;  // Spectre terminal order
};

// Shared by the pipeline and the synthetic generator.
class PinTable {
 public:
  // Built-in conventions:
  //   two-terminal parts  p (0.5,0)  n (0.5,1)
  //   nmos/pmos           d (1,0.25) g (0,0.5) s (1,0.75) b (1,0.5)
  //   opamp               inp (0,0.25) inn (0,0.75) out (1,0.5)
  //   gnd/vdd/port        t (0.5,0)
  static const PinTable& builtin();

  // JSON object keyed by type keyword, each a list of {name,u,v}. Types not
  // present keep their built-in entry.
  static PinTable load_override(const std::filesystem::path& path);

  const PinSpec& spec(ElementType t) const;
  std::size_t pin_count(ElementType t) const { return spec(t).pins.size(); }
  // Index of the MOS bulk terminal, or -1.
  static int bulk_index(ElementType t);

 private:
  std::map<ElementType, PinSpec> specs_;
};

}  // namespace netlift
