#pragma once

#include "minudesc/image.hpp"

namespace minudesc {

// DOG band-pass + local mean/variance regularization parameters.
// Reference values are for 500 dpi; sigmas scale linearly with dpi/500.
struct EnhanceParams {
  double sigma1 = 1.0;
  double sigma2 = 4.0;
  int window = 15;  // local statistics window side, odd
  double c = 40.0;  // target local standard deviation

  void validate() const;
};

// Truncated 1-D Gaussian normalized to unit sum, support [-radius, radius].
std::vector<double> gaussian1d(double sigma, int radius);

// Truncation radius used for the DOG kernel support.
int dog_radius(double sigma2);

// The sampled DOG kernel D = G_{sigma1} - G_{sigma2} (both unit discrete
// mass, so the entries sum to zero). Returned as a (2r+1)^2 raster.
RealRaster dog_kernel(double sigma1, double sigma2);

// Band-pass filter: correlation with the DOG kernel, mirror-padded borders.
// Computed as two separable Gaussian passes subtracted.
RealRaster dog_filter(const RealRaster& img, double sigma1, double sigma2);
RealRaster dog_filter(const GrayImage& img, double sigma1, double sigma2);

// out = c * (in - m) / sqrt(var) + 128 with m, var over the window centered
// at each pixel (mirror-padded); pixels with var < 1e-12 map to 128.
RealRaster local_normalize(const RealRaster& in, int window, double c);

// dog_filter followed by local_normalize.
RealRaster enhance(const GrayImage& img, const EnhanceParams& params);

EnhanceParams scale_for_dpi(const EnhanceParams& p, int dpi);

}  // namespace minudesc
