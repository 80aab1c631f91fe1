#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "netlift/netlist.hpp"

namespace netlift {

// Header comment, `simulator lang=spectre`, then one instance line
//   <name> (<net> ...) <model>
// per component in natural name order. Ground aliases are written as "0".
std::string emit_spectre(const Netlist& n);

// Accepts the emit grammar, `//` comments, blank lines and trailing
// key=value parameters (discarded). Errors carry the 1-based line number.
Netlist parse_spectre(std::string_view text);

Netlist load_spectre(const std::filesystem::path& path);
void save_spectre(const Netlist& n, const std::filesystem::path& path);

}  // namespace netlift
