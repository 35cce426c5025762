#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "minudesc/image.hpp"
#include "minudesc/minutiae.hpp"

namespace minudesc {

// One truncated complex Gabor kernel sampled at integer offsets.
struct GaborKernel {
  int radius = 0;
  std::vector<std::complex<double>> w;  // (2*radius+1)^2, row-major

  std::complex<double> at(int dx, int dy) const {
    return w[static_cast<size_t>(dy + radius) * (2 * radius + 1) + (dx + radius)];
  }
};

// 40 kernels: 5 frequencies (nu) x 8 orientations (mu).
//   k_nu = kmax / 2^(nu/2),  phi_mu = pi*mu/8
// kernel(z) = (|k|^2/sigma^2) exp(-|k|^2|z|^2/(2 sigma^2)) (exp(i k.z) - kappa)
// where kappa is chosen so the truncated kernel sums to exactly zero (the
// continuum value is exp(-sigma^2/2)).
struct GaborBank {
  double sigma = kTwoPi;
  double kmax = kPi / 2.0;
  std::array<GaborKernel, 40> kernels;  // index nu*8 + mu

  static constexpr int num_freq = 5;
  static constexpr int num_orient = 8;

  const GaborKernel& kernel(int mu, int nu) const { return kernels[nu * num_orient + mu]; }
  static double freq(double kmax, int nu) { return kmax / std::pow(2.0, nu / 2.0); }
};

GaborBank build_bank(double sigma, double kmax);

// The 9 descriptor sampling positions: the minutia plus 8 points at the
// given radius, at angles theta + j*pi/4 (y-down convention).
struct SamplingFrame {
  std::array<std::array<double, 2>, 9> points;  // [0] = minutia
  double radius = 18.0;
};

SamplingFrame sampling_points(const Minutia& m, double radius);

// |sum_z kernel(z) * raster(round(p)+z)|; zero outside the raster.
double response(const RealRaster& raster, double px, double py, const GaborBank& bank, int mu,
                int nu);

// 360 non-negative magnitudes, ordered point-major, then nu, then mu.
struct RawJet {
  std::array<double, 360> values{};
};

RawJet raw_jet(const RealRaster& raster, const Minutia& m, const GaborBank& bank, double radius);

// Jets for a whole minutia set (parallel over minutiae).
std::vector<RawJet> raw_jets(const RealRaster& raster, std::span<const Minutia> minutiae,
                             const GaborBank& bank, double radius);

// L2 normalization applied before subspace projection; zero jets stay zero.
RawJet l2_normalized(const RawJet& jet);

}  // namespace minudesc
