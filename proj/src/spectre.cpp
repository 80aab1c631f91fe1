#include "netlift/spectre.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <vector>

#include "file_util.hpp"
#include "netlift/error.hpp"
#include "netlift/pin_table.hpp"

namespace netlift {

std::string emit_spectre(const Netlist& n) {
  validate(n);
  std::vector<const Component*> order;
  for (const auto& c : n.components) order.push_back(&c);
  std::stable_sort(order.begin(), order.end(),
                   [](const Component* a, const Component* b) { return natural_less(a->name, b->name); });
  std::string out = "// generated by netlift\nsimulator lang=spectre\n";
  for (const auto* c : order) {
    out += c->name;
    out += " (";
    for (std::size_t i = 0; i < c->pins.size(); ++i) {
      if (i) out += ' ';
      out += is_ground_alias(c->pins[i]) ? std::string("0") : c->pins[i];
    }
    out += ") ";
    out += to_string(c->etype);
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

Netlist parse_spectre(std::string_view text) {
  Netlist n;
  std::set<std::string> names;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto tokens_all = split_ws(line);
    if (tokens_all.empty()) continue;
    if (tokens_all[0].starts_with("//")) continue;
    if (tokens_all.size() == 2 && tokens_all[0] == "simulator" && tokens_all[1] == "lang=spectre") continue;

    const std::size_t open = line.find('(');
    const std::size_t close = line.find(')');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
      throw ParseError("expected '<name> (<nets>) <model>'", line_no);
    }
    if (line.find('(', open + 1) != std::string_view::npos || line.find(')', close + 1) != std::string_view::npos) {
      throw ParseError("unbalanced parentheses", line_no);
    }
    const auto name_tok = split_ws(line.substr(0, open));
    if (name_tok.size() != 1) throw ParseError("expected exactly one instance name before '('", line_no);
    const auto nets = split_ws(line.substr(open + 1, close - open - 1));
    const auto rest = split_ws(line.substr(close + 1));
    if (rest.empty()) throw ParseError("missing model after ')'", line_no);
    for (std::size_t i = 1; i < rest.size(); ++i) {
      if (rest[i].find('=') == std::string::npos || rest[i].front() == '=') {
        throw ParseError("unexpected token '" + rest[i] + "' after model", line_no);
      }
    }
    Component c;
    c.name = name_tok[0];
    try {
      c.etype = element_type_from_string(rest[0]);
    } catch (const FormatError&) {
      throw ParseError("unknown model '" + rest[0] + "'", line_no);
    }
    if (is_symbol(c.etype)) {
      throw ParseError("unknown model '" + rest[0] + "'", line_no);
    }
    const auto expected = PinTable::builtin().pin_count(c.etype);
    if (nets.size() != expected) {
      throw ParseError(rest[0] + " " + c.name + " needs " + std::to_string(expected) + " terminals, got " +
                           std::to_string(nets.size()),
                       line_no);
    }
    if (!names.insert(c.name).second) throw ParseError("duplicate component name " + c.name, line_no);
    c.pins = nets;
    n.components.push_back(std::move(c));
  }
  canonicalize(n);
  return n;
}

Netlist load_spectre(const std::filesystem::path& path) {
  const std::string text = detail::read_file(path);
  try {
    return parse_spectre(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

void save_spectre(const Netlist& n, const std::filesystem::path& path) { detail::write_file(path, emit_spectre(n)); }

}  // namespace netlift
