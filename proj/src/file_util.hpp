#pragma once

#include <filesystem>
#include <string>

namespace netlift::detail {

std::string read_file(const std::filesystem::path& path);
// Writes through a sibling temp file so readers never see a partial file.
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace netlift::detail
