#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "netlift/exec.hpp"
#include "netlift/geometry.hpp"

namespace netlift {

inline constexpr int kMaxImageDim = 16384;

// 8-bit grayscale, 0 = black.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> values;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 255)
      : width(w), height(h), values(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

  bool empty() const { return width == 0 || height == 0; }
  std::uint8_t get(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  void set(int x, int y, std::uint8_t v) { values[static_cast<std::size_t>(y) * width + x] = v; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

struct ThresholdSpec {
  enum class Mode { Fixed, Otsu };
  Mode mode = Mode::Fixed;
  int level = 128;

  static ThresholdSpec fixed(int level);
  static ThresholdSpec otsu() { return {Mode::Otsu, 0}; }
};

// Integer luminance used for RGB input.
inline std::uint8_t luminance(int r, int g, int b) {
  return static_cast<std::uint8_t>((r * 299 + g * 587 + b * 114 + 500) / 1000);
}

// PGM (P5) or PNG, detected by magic bytes.
GrayImage load_image(const std::filesystem::path& path);
void save_pgm(const GrayImage& img, const std::filesystem::path& path);

// Threshold t such that ink = intensity < t, chosen to maximise the
// between-class variance of the histogram; ties go to the lower t.
int otsu_threshold(const GrayImage& img);

BitMask binarize(const GrayImage& img, ThresholdSpec spec, Exec exec = Exec::Parallel);

// Clears every pixel inside any box grown by `margin`. Boxes are clipped.
BitMask subtract_regions(const BitMask& mask, std::span<const BBox> boxes, int margin);

void save_mask(const BitMask& mask, const std::filesystem::path& path);
BitMask load_mask(const std::filesystem::path& path);

// Overlay regions the extractor should not read as wire ink.
//   Area:    everything inside the box is dropped (same as subtract_regions).
//   Outline: only the 1-px rectangle border is dropped; wires crossing the
//            border are re-bridged straight across the erased band.
struct IgnoreRegion {
  enum class Kind { Area, Outline };
  BBox box;
  Kind kind = Kind::Outline;

  friend bool operator==(const IgnoreRegion&, const IgnoreRegion&) = default;
};

// Half-width of the band erased around an outline border.
inline constexpr int kOutlineBand = 1;

BitMask apply_ignore_regions(const BitMask& mask, std::span<const IgnoreRegion> regions);

std::vector<IgnoreRegion> load_ignore_regions(const std::filesystem::path& path);
void save_ignore_regions(std::span<const IgnoreRegion> regions, const std::filesystem::path& path);

}  // namespace netlift
