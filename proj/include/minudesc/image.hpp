#pragma once

#include <cstdint>
#include <vector>

#include "minudesc/common.hpp"

namespace minudesc {

// 8-bit grayscale raster. 0 = dark (ridge), 255 = bright (valley).
struct GrayImage {
  int width = 0;
  int height = 0;
  int dpi = 500;
  std::vector<std::uint8_t> pixels;  // row-major, width*height

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0, int dpi_ = 500)
      : width(w), height(h), dpi(dpi_), pixels(static_cast<size_t>(w) * h, fill) {}

  std::uint8_t at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return pixels[static_cast<size_t>(y) * width + x]; }
  bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

// Real-valued raster used for all intermediate filtered data.
struct RealRaster {
  int width = 0;
  int height = 0;
  std::vector<double> values;  // row-major

  RealRaster() = default;
  RealRaster(int w, int h, double fill = 0.0)
      : width(w), height(h), values(static_cast<size_t>(w) * h, fill) {}

  double at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
  double& at(int x, int y) { return values[static_cast<size_t>(y) * width + x]; }
  bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

inline RealRaster to_real(const GrayImage& img) {
  RealRaster r(img.width, img.height);
  for (size_t i = 0; i < img.pixels.size(); ++i) r.values[i] = img.pixels[i];
  return r;
}

// Quantizes to 8 bits (clamping); only used for visualization/debug export.
inline GrayImage to_gray(const RealRaster& r, int dpi = 500) {
  GrayImage img(r.width, r.height, 0, dpi);
  for (size_t i = 0; i < r.values.size(); ++i) {
    double v = std::lround(r.values[i]);
    img.pixels[i] = static_cast<std::uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
  }
  return img;
}

// Mirror index for border handling: ..., 1, 0 | 0, 1, ..., n-1 | n-1, n-2, ...
// Iterates so that supports wider than the raster still resolve.
inline int mirror_index(int i, int n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -1 - i;
    if (i >= n) i = 2 * n - 1 - i;
  }
  return i;
}

}  // namespace minudesc
