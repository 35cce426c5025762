#pragma once

#include <array>
#include <vector>

#include "minudesc/enhance.hpp"
#include "minudesc/image.hpp"

namespace minudesc {

enum class MinutiaKind { termination, bifurcation };

// Ridge discontinuity feature. theta in [0, 2*pi), image coordinates with
// y growing downward. For a termination theta points along the ridge away
// from the ending; for a bifurcation along the valley between the branches.
struct Minutia {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  MinutiaKind kind = MinutiaKind::termination;
};

struct SegmentationMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> fg;  // 1 = fingerprint foreground

  SegmentationMask() = default;
  SegmentationMask(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), fg(static_cast<size_t>(w) * h, fill) {}
  bool at(int x, int y) const { return fg[static_cast<size_t>(y) * width + x] != 0; }
  void set(int x, int y, bool v) { fg[static_cast<size_t>(y) * width + x] = v ? 1 : 0; }
};

// Block-wise ridge orientation (radians mod pi) from gradient covariance.
struct OrientationField {
  int block = 16;
  int bx = 0, by = 0;              // grid dimensions
  std::vector<double> angle;       // [by*bx], valid where foreground
  std::vector<double> coherence;   // [by*bx], in [0, 1]
  std::vector<std::uint8_t> foreground;

  double block_angle(int i, int j) const { return angle[static_cast<size_t>(j) * bx + i]; }
  bool block_fg(int i, int j) const { return foreground[static_cast<size_t>(j) * bx + i] != 0; }
  // Orientation at a pixel: angle of the enclosing block.
  double at_pixel(int x, int y) const;
};

struct MinutiaeParams {
  int block = 16;                    // orientation field block at 500 dpi
  double coherence_threshold = 0.3;  // foreground gate
  double energy_threshold = 1.0;     // mean squared gradient per pixel
  int binarize_window = 15;          // adaptive threshold window
  double min_spur_length = 10.0;     // px
  double merge_distance = 8.0;       // px
  double border_exclusion = 12.0;    // px from mask boundary
  int term_trace = 8;                // skeleton walk length, terminations
  int bif_trace = 11;                // skeleton walk length, bifurcations

  void validate() const;
};

struct Skeleton {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> on;

  Skeleton() = default;
  Skeleton(int w, int h) : width(w), height(h), on(static_cast<size_t>(w) * h, 0) {}
  bool at(int x, int y) const { return on[static_cast<size_t>(y) * width + x] != 0; }
  void set(int x, int y, bool v) { on[static_cast<size_t>(y) * width + x] = v ? 1 : 0; }
};

OrientationField orientation_field(const GrayImage& img, int block,
                                   double coherence_threshold = 0.3,
                                   double energy_threshold = 1.0);

SegmentationMask mask_from_field(const OrientationField& field, int width, int height);

// Adaptive-threshold binarization + thinning; ridges end up 8-connected and
// one pixel wide (no fully-set 2x2 block). Thinning is Zhang-Suen with a
// connectivity-preserving 2x2 cleanup pass.
Skeleton binarize_thin(const GrayImage& img, const SegmentationMask& mask,
                       int binarize_window = 15);
Skeleton binarize_thin(const RealRaster& raster, const SegmentationMask& mask,
                       int binarize_window = 15);

// Crossing number of a 3x3 boolean neighborhood (row-major, center = [4]):
// half the cyclic transition count over the 8 neighbors.
int crossing_number(const std::array<std::uint8_t, 9>& p);

// Full extraction pipeline: orientation field, enhancement, binarize/thin,
// crossing-number scan, spurious filtering.
std::vector<Minutia> extract_minutiae(const GrayImage& img, const MinutiaeParams& params,
                                      const EnhanceParams& enhance_params);

MinutiaeParams scale_for_dpi(const MinutiaeParams& p, int dpi);

}  // namespace minudesc
