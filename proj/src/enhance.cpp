#include "minudesc/enhance.hpp"

#include <cmath>

namespace minudesc {

void EnhanceParams::validate() const {
  if (sigma1 <= 0 || sigma2 <= 0 || sigma1 >= sigma2)
    throw Error(Errc::invalid_parameter, "enhance: requires 0 < sigma1 < sigma2");
  if (window < 3 || window % 2 == 0)
    throw Error(Errc::invalid_parameter, "enhance: window must be odd and >= 3");
  if (c <= 0) throw Error(Errc::invalid_parameter, "enhance: c must be positive");
}

std::vector<double> gaussian1d(double sigma, int radius) {
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    double v = std::exp(-(double(i) * i) / (2.0 * sigma * sigma));
    k[i + radius] = v;
    sum += v;
  }
  for (double& v : k) v /= sum;
  return k;
}

int dog_radius(double sigma2) { return static_cast<int>(std::ceil(3.5 * sigma2)); }

RealRaster dog_kernel(double sigma1, double sigma2) {
  if (sigma1 <= 0 || sigma2 <= 0 || sigma1 >= sigma2)
    throw Error(Errc::invalid_parameter, "dog_kernel: requires 0 < sigma1 < sigma2");
  int r = dog_radius(sigma2);
  auto g1 = gaussian1d(sigma1, r);
  auto g2 = gaussian1d(sigma2, r);
  RealRaster k(2 * r + 1, 2 * r + 1);
  for (int y = 0; y <= 2 * r; ++y)
    for (int x = 0; x <= 2 * r; ++x) k.at(x, y) = g1[x] * g1[y] - g2[x] * g2[y];
  return k;
}

namespace {

// Separable correlation with a symmetric 1-D kernel, mirror borders.
RealRaster conv_separable(const RealRaster& in, const std::vector<double>& k) {
  const int r = (static_cast<int>(k.size()) - 1) / 2;
  const int w = in.width, h = in.height;
  RealRaster tmp(w, h), out(w, h);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += k[i + r] * in.at(mirror_index(x + i, w), y);
      tmp.at(x, y) = acc;
    }
  }
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += k[i + r] * tmp.at(x, mirror_index(y + i, h));
      out.at(x, y) = acc;
    }
  }
  return out;
}

// Sliding window sums of v and v^2 over a (window x window) neighborhood,
// mirror-padded. Separable two-pass box sums.
void box_sums(const RealRaster& in, int window, RealRaster& sum, RealRaster& sumsq) {
  const int r = window / 2;
  const int w = in.width, h = in.height;
  RealRaster rs(w, h), rs2(w, h);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0, s2 = 0.0;
      for (int i = -r; i <= r; ++i) {
        double v = in.at(mirror_index(x + i, w), y);
        s += v;
        s2 += v * v;
      }
      rs.at(x, y) = s;
      rs2.at(x, y) = s2;
    }
  }
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0, s2 = 0.0;
      for (int i = -r; i <= r; ++i) {
        int yy = mirror_index(y + i, h);
        s += rs.at(x, yy);
        s2 += rs2.at(x, yy);
      }
      sum.at(x, y) = s;
      sumsq.at(x, y) = s2;
    }
  }
}

}  // namespace

RealRaster dog_filter(const RealRaster& img, double sigma1, double sigma2) {
  if (sigma1 <= 0 || sigma2 <= 0 || sigma1 >= sigma2)
    throw Error(Errc::invalid_parameter, "dog_filter: requires 0 < sigma1 < sigma2");
  int r = dog_radius(sigma2);
  auto g1 = gaussian1d(sigma1, r);
  auto g2 = gaussian1d(sigma2, r);
  RealRaster a = conv_separable(img, g1);
  RealRaster b = conv_separable(img, g2);
  for (size_t i = 0; i < a.values.size(); ++i) a.values[i] -= b.values[i];
  return a;
}

RealRaster dog_filter(const GrayImage& img, double sigma1, double sigma2) {
  return dog_filter(to_real(img), sigma1, sigma2);
}

RealRaster local_normalize(const RealRaster& in, int window, double c) {
  if (window < 3 || window % 2 == 0)
    throw Error(Errc::invalid_parameter, "local_normalize: window must be odd and >= 3");
  const int w = in.width, h = in.height;
  const double n = double(window) * window;
  RealRaster sum(w, h), sumsq(w, h), out(w, h);
  box_sums(in, window, sum, sumsq);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double m = sum.at(x, y) / n;
      double var = sumsq.at(x, y) / n - m * m;
      out.at(x, y) = var < 1e-12 ? 128.0 : c * (in.at(x, y) - m) / std::sqrt(var) + 128.0;
    }
  }
  return out;
}

RealRaster enhance(const GrayImage& img, const EnhanceParams& params) {
  params.validate();
  if (img.width < 32 || img.height < 32)
    throw Error(Errc::invalid_parameter, "enhance: image must be at least 32x32");
  return local_normalize(dog_filter(img, params.sigma1, params.sigma2), params.window, params.c);
}

EnhanceParams scale_for_dpi(const EnhanceParams& p, int dpi) {
  EnhanceParams out = p;
  double s = double(dpi) / 500.0;
  out.sigma1 = p.sigma1 * s;
  out.sigma2 = p.sigma2 * s;
  int win = static_cast<int>(std::lround(p.window * s));
  if (win % 2 == 0) ++win;
  out.window = std::max(3, win);
  return out;
}

}  // namespace minudesc
