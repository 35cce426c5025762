#include "minudesc/gabor.hpp"

#include <cmath>

namespace minudesc {

GaborBank build_bank(double sigma, double kmax) {
  if (sigma <= 0 || kmax <= 0 || kmax > kPi)
    throw Error(Errc::invalid_parameter, "build_bank: requires sigma > 0 and 0 < kmax <= pi");
  GaborBank bank;
  bank.sigma = sigma;
  bank.kmax = kmax;
  for (int nu = 0; nu < GaborBank::num_freq; ++nu) {
    const double k = GaborBank::freq(kmax, nu);
    // envelope std is sigma/k; odd window of radius ceil(3*sigma/k)
    const int r = static_cast<int>(std::ceil(3.0 * sigma / k));
    for (int mu = 0; mu < GaborBank::num_orient; ++mu) {
      const double phi = kPi * mu / 8.0;
      const double kx = k * std::cos(phi), ky = k * std::sin(phi);
      GaborKernel kern;
      kern.radius = r;
      kern.w.resize(static_cast<size_t>(2 * r + 1) * (2 * r + 1));
      // First pass: envelope and carrier, accumulating the sums that fix
      // the DC-free constant kappa for the truncated support.
      double env_sum = 0.0;
      std::complex<double> osc_sum = 0.0;
      size_t idx = 0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx, ++idx) {
          const double r2 = double(dx) * dx + double(dy) * dy;
          const double env = (k * k / (sigma * sigma)) * std::exp(-k * k * r2 / (2 * sigma * sigma));
          const std::complex<double> carrier = std::polar(1.0, kx * dx + ky * dy);
          kern.w[idx] = env * carrier;
          env_sum += env;
          osc_sum += env * carrier;
        }
      }
      const std::complex<double> kappa = osc_sum / env_sum;
      idx = 0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx, ++idx) {
          const double r2 = double(dx) * dx + double(dy) * dy;
          const double env = (k * k / (sigma * sigma)) * std::exp(-k * k * r2 / (2 * sigma * sigma));
          kern.w[idx] -= env * kappa;
        }
      }
      bank.kernels[nu * GaborBank::num_orient + mu] = std::move(kern);
    }
  }
  return bank;
}

SamplingFrame sampling_points(const Minutia& m, double radius) {
  SamplingFrame frame;
  frame.radius = radius;
  frame.points[0] = {m.x, m.y};
  for (int j = 0; j < 8; ++j) {
    const double a = m.theta + j * (kPi / 4.0);
    frame.points[j + 1] = {m.x + radius * std::cos(a), m.y + radius * std::sin(a)};
  }
  return frame;
}

double response(const RealRaster& raster, double px, double py, const GaborBank& bank, int mu,
                int nu) {
  const GaborKernel& kern = bank.kernel(mu, nu);
  const int cx = static_cast<int>(std::lround(px));
  const int cy = static_cast<int>(std::lround(py));
  const int r = kern.radius;
  double re = 0.0, im = 0.0;
  size_t idx = 0;
  for (int dy = -r; dy <= r; ++dy) {
    const int y = cy + dy;
    if (y < 0 || y >= raster.height) {
      idx += static_cast<size_t>(2 * r + 1);
      continue;
    }
    const double* row = raster.values.data() + static_cast<size_t>(y) * raster.width;
    for (int dx = -r; dx <= r; ++dx, ++idx) {
      const int x = cx + dx;
      if (x < 0 || x >= raster.width) continue;
      const double v = row[x];
      re += kern.w[idx].real() * v;
      im += kern.w[idx].imag() * v;
    }
  }
  return std::hypot(re, im);
}

RawJet raw_jet(const RealRaster& raster, const Minutia& m, const GaborBank& bank, double radius) {
  const SamplingFrame frame = sampling_points(m, radius);
  RawJet jet;
  int out = 0;
  for (int p = 0; p < 9; ++p)
    for (int nu = 0; nu < GaborBank::num_freq; ++nu)
      for (int mu = 0; mu < GaborBank::num_orient; ++mu)
        jet.values[out++] = response(raster, frame.points[p][0], frame.points[p][1], bank, mu, nu);
  return jet;
}

std::vector<RawJet> raw_jets(const RealRaster& raster, std::span<const Minutia> minutiae,
                             const GaborBank& bank, double radius) {
  std::vector<RawJet> jets(minutiae.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(minutiae.size()); ++i)
    jets[i] = raw_jet(raster, minutiae[i], bank, radius);
  return jets;
}

RawJet l2_normalized(const RawJet& jet) {
  double sq = 0.0;
  for (double v : jet.values) sq += v * v;
  RawJet out = jet;
  if (sq > 0.0) {
    const double inv = 1.0 / std::sqrt(sq);
    for (double& v : out.values) v *= inv;
  }
  return out;
}

}  // namespace minudesc
