#include "netlift/raster.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "file_util.hpp"

#include "netlift/error.hpp"

namespace netlift {

namespace {

using detail::read_file;
using detail::write_file;

// Netpbm header: magic, then whitespace/comment separated integers, then a
// single whitespace byte before the raster.
struct PnmHeader {
  std::vector<int> fields;
  std::size_t data_offset = 0;
};

PnmHeader parse_pnm_header(const std::string& bytes, std::string_view magic, int nfields,
                           const std::string& what) {
  if (bytes.size() < 2 || bytes.compare(0, 2, magic) != 0) {
    throw FormatError(what + ": bad magic, expected " + std::string(magic));
  }
  PnmHeader h;
  std::size_t i = 2;
  while (static_cast<int>(h.fields.size()) < nfields) {
    while (i < bytes.size() && (std::isspace(static_cast<unsigned char>(bytes[i])) || bytes[i] == '#')) {
      if (bytes[i] == '#') {
        while (i < bytes.size() && bytes[i] != '\n') ++i;
      } else {
        ++i;
      }
    }
    if (i >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[i]))) {
      throw FormatError(what + ": corrupt header");
    }
    long v = 0;
    while (i < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[i]))) {
      v = v * 10 + (bytes[i] - '0');
      if (v > 1'000'000) throw FormatError(what + ": header value out of range");
      ++i;
    }
    h.fields.push_back(static_cast<int>(v));
  }
  if (i >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[i]))) {
    throw FormatError(what + ": corrupt header");
  }
  h.data_offset = i + 1;
  return h;
}

void check_dims(int w, int h, const std::string& what) {
  if (w <= 0 || h <= 0 || w > kMaxImageDim || h > kMaxImageDim) {
    throw FormatError(what + ": dimensions " + std::to_string(w) + "x" + std::to_string(h) + " out of range");
  }
}

GrayImage load_pgm_bytes(const std::string& bytes, const std::string& what) {
  const auto h = parse_pnm_header(bytes, "P5", 3, what);
  const int w = h.fields[0];
  const int ht = h.fields[1];
  const int maxval = h.fields[2];
  check_dims(w, ht, what);
  if (maxval <= 0 || maxval > 255) throw FormatError(what + ": only 8-bit PGM is supported");
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(ht);
  if (bytes.size() - h.data_offset < n) throw FormatError(what + ": truncated raster");
  GrayImage img(w, ht);
  for (std::size_t k = 0; k < n; ++k) {
    const int v = static_cast<unsigned char>(bytes[h.data_offset + k]);
    img.values[k] = static_cast<std::uint8_t>(maxval == 255 ? v : std::min(255, v * 255 / maxval));
  }
  return img;
}

GrayImage load_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw FormatError(path.string() + ": " + image.message);
  }
  if (static_cast<int>(image.width) > kMaxImageDim || static_cast<int>(image.height) > kMaxImageDim) {
    png_image_free(&image);
    throw FormatError(path.string() + ": dimensions out of range");
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<png_byte> buf(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw FormatError(path.string() + ": " + msg);
  }
  GrayImage img(static_cast<int>(image.width), static_cast<int>(image.height));
  const std::size_t n = img.values.size();
  if (color) {
    for (std::size_t k = 0; k < n; ++k) img.values[k] = luminance(buf[3 * k], buf[3 * k + 1], buf[3 * k + 2]);
  } else {
    std::copy(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(n), img.values.begin());
  }
  return img;
}

}  // namespace

ThresholdSpec ThresholdSpec::fixed(int level) {
  if (level < 0 || level > 255) throw ValidationError("threshold level must be in 0..255");
  return {Mode::Fixed, level};
}

GrayImage load_image(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("no such file: " + path.string());
  std::ifstream in(path, std::ios::binary);
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  const auto got = in.gcount();
  in.close();
  static constexpr unsigned char kPng[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (got == 8 && std::equal(magic.begin(), magic.end(), kPng,
                             [](char a, unsigned char b) { return static_cast<unsigned char>(a) == b; })) {
    return load_png(path);
  }
  if (got >= 2 && magic[0] == 'P' && magic[1] == '5') return load_pgm_bytes(read_file(path), path.string());
  throw FormatError(path.string() + ": unsupported image format (expected PGM P5 or PNG)");
}

void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
  std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.values.data()), img.values.size());
  write_file(path, out);
}

int otsu_threshold(const GrayImage& img) {
  if (img.empty()) throw ValidationError("otsu threshold of an empty image");
  std::array<double, 256> hist{};
  for (auto v : img.values) hist[v] += 1.0;
  const double total = static_cast<double>(img.values.size());
  double sum_all = 0;
  for (int i = 0; i < 256; ++i) sum_all += i * hist[i];
  // class 0 = values < t
  double w0 = 0;
  double sum0 = 0;
  double best_var = -1;
  int best_t = 0;
  for (int t = 1; t <= 255; ++t) {
    w0 += hist[t - 1];
    sum0 += (t - 1) * hist[t - 1];
    const double w1 = total - w0;
    if (w0 == 0 || w1 == 0) continue;
    const double m0 = sum0 / w0;
    const double m1 = (sum_all - sum0) / w1;
    const double var = w0 * w1 * (m0 - m1) * (m0 - m1);
    if (var > best_var) {
      best_var = var;
      best_t = t;
    }
  }
  // Uniform image: nothing separates; treat as background.
  return best_var < 0 ? 0 : best_t;
}

BitMask binarize(const GrayImage& img, ThresholdSpec spec, Exec exec) {
  if (img.empty()) throw ValidationError("binarize of an empty image");
  const int t = spec.mode == ThresholdSpec::Mode::Otsu ? otsu_threshold(img) : spec.level;
  BitMask out(img.width, img.height);
  const auto* src = img.values.data();
  auto* dst = out.data().data();
  const auto n = static_cast<std::ptrdiff_t>(img.values.size());
  if (exec == Exec::Serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) dst[i] = src[i] < t ? 1 : 0;
  } else {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) dst[i] = src[i] < t ? 1 : 0;
  }
  return out;
}

BitMask subtract_regions(const BitMask& mask, std::span<const BBox> boxes, int margin) {
  BitMask out = mask;
  for (const auto& b : boxes) {
    const int x0 = std::max(0, b.min().x - margin);
    const int y0 = std::max(0, b.min().y - margin);
    const int x1 = std::min(mask.width() - 1, b.max().x + margin);
    const int y1 = std::min(mask.height() - 1, b.max().y + margin);
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) out.set(x, y, false);
    }
  }
  return out;
}

void save_mask(const BitMask& mask, const std::filesystem::path& path) {
  std::string out = "P4\n" + std::to_string(mask.width()) + " " + std::to_string(mask.height()) + "\n";
  const int row_bytes = (mask.width() + 7) / 8;
  std::string row(static_cast<std::size_t>(row_bytes), '\0');
  for (int y = 0; y < mask.height(); ++y) {
    std::fill(row.begin(), row.end(), '\0');
    for (int x = 0; x < mask.width(); ++x) {
      if (mask.get(x, y)) row[static_cast<std::size_t>(x / 8)] |= static_cast<char>(0x80 >> (x % 8));
    }
    out += row;
  }
  write_file(path, out);
}

BitMask load_mask(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  const auto h = parse_pnm_header(bytes, "P4", 2, path.string());
  const int w = h.fields[0];
  const int ht = h.fields[1];
  check_dims(w, ht, path.string());
  const std::size_t row_bytes = static_cast<std::size_t>((w + 7) / 8);
  if (bytes.size() - h.data_offset < row_bytes * static_cast<std::size_t>(ht)) {
    throw FormatError(path.string() + ": truncated raster");
  }
  BitMask m(w, ht);
  for (int y = 0; y < ht; ++y) {
    const char* row = bytes.data() + h.data_offset + row_bytes * static_cast<std::size_t>(y);
    for (int x = 0; x < w; ++x) {
      if (static_cast<unsigned char>(row[x / 8]) & (0x80 >> (x % 8))) m.set(x, y);
    }
  }
  return m;
}

namespace {

struct Band {
  int x0, y0, x1, y1;
  bool horizontal;  // bridged vertically across rows
};

std::vector<Band> outline_bands(const BBox& b) {
  const int k = kOutlineBand;
  const int x0 = b.min().x, y0 = b.min().y, x1 = b.max().x, y1 = b.max().y;
  return {
      {x0 - k, y0 - k, x1 + k, y0 + k, true},
      {x0 - k, y1 - k, x1 + k, y1 + k, true},
      {x0 - k, y0 - k, x0 + k, y1 + k, false},
      {x1 - k, y0 - k, x1 + k, y1 + k, false},
  };
}

void clear_rect(BitMask& m, int x0, int y0, int x1, int y1) {
  x0 = std::max(0, x0);
  y0 = std::max(0, y0);
  x1 = std::min(m.width() - 1, x1);
  y1 = std::min(m.height() - 1, y1);
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) m.set(x, y, false);
  }
}

}  // namespace

BitMask apply_ignore_regions(const BitMask& mask, std::span<const IgnoreRegion> regions) {
  BitMask cleared = mask;
  std::vector<Band> bands;
  for (const auto& r : regions) {
    if (r.kind == IgnoreRegion::Kind::Area) {
      clear_rect(cleared, r.box.min().x, r.box.min().y, r.box.max().x, r.box.max().y);
      continue;
    }
    for (const auto& b : outline_bands(r.box)) {
      clear_rect(cleared, b.x0, b.y0, b.x1, b.y1);
      bands.push_back(b);
    }
  }
  // Bridge wires straight across each erased band, reading only the cleared
  // mask so bands never feed each other.
  BitMask out = cleared;
  for (const auto& b : bands) {
    if (b.horizontal) {
      for (int x = std::max(0, b.x0); x <= std::min(mask.width() - 1, b.x1); ++x) {
        if (!cleared.at(x, b.y0 - 1) || !cleared.at(x, b.y1 + 1)) continue;
        for (int y = std::max(0, b.y0); y <= std::min(mask.height() - 1, b.y1); ++y) {
          if (mask.get(x, y)) out.set(x, y);
        }
      }
    } else {
      for (int y = std::max(0, b.y0); y <= std::min(mask.height() - 1, b.y1); ++y) {
        if (!cleared.at(b.x0 - 1, y) || !cleared.at(b.x1 + 1, y)) continue;
        for (int x = std::max(0, b.x0); x <= std::min(mask.width() - 1, b.x1); ++x) {
          if (mask.get(x, y)) out.set(x, y);
        }
      }
    }
  }
  return out;
}

std::vector<IgnoreRegion> load_ignore_regions(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  std::vector<IgnoreRegion> out;
  try {
    for (const auto& r : doc.at("regions")) {
      const auto& bb = r.at("bbox");
      if (!bb.is_array() || bb.size() != 4) throw FormatError(path.string() + ": bbox must be [x0,y0,x1,y1]");
      IgnoreRegion reg;
      reg.box = BBox(bb[0].get<int>(), bb[1].get<int>(), bb[2].get<int>(), bb[3].get<int>());
      const std::string kind = r.value("kind", "outline");
      if (kind == "outline") {
        reg.kind = IgnoreRegion::Kind::Outline;
      } else if (kind == "area") {
        reg.kind = IgnoreRegion::Kind::Area;
      } else {
        throw FormatError(path.string() + ": unknown region kind '" + kind + "'");
      }
      out.push_back(reg);
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return out;
}

void save_ignore_regions(std::span<const IgnoreRegion> regions, const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["regions"] = nlohmann::json::array();
  for (const auto& r : regions) {
    doc["regions"].push_back({{"bbox", {r.box.min().x, r.box.min().y, r.box.max().x, r.box.max().y}},
                              {"kind", r.kind == IgnoreRegion::Kind::Area ? "area" : "outline"}});
  }
  write_file(path, doc.dump(1) + "\n");
}

}  // namespace netlift
