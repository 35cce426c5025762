#include "reference.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace minudesc::ref {

RealRaster conv2d_direct(const RealRaster& in, const RealRaster& kernel) {
  const int r = (kernel.width - 1) / 2;
  RealRaster out(in.width, in.height);
  for (int y = 0; y < in.height; ++y) {
    for (int x = 0; x < in.width; ++x) {
      double acc = 0.0;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx)
          acc += kernel.at(dx + r, dy + r) *
                 in.at(mirror_index(x + dx, in.width), mirror_index(y + dy, in.height));
      out.at(x, y) = acc;
    }
  }
  return out;
}

RealRaster dog_kernel_direct(double sigma1, double sigma2, int radius) {
  RealRaster g1(2 * radius + 1, 2 * radius + 1), g2 = g1, out = g1;
  double s1 = 0.0, s2 = 0.0;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx) {
      const double r2 = double(dx) * dx + double(dy) * dy;
      g1.at(dx + radius, dy + radius) = std::exp(-r2 / (2.0 * sigma1 * sigma1));
      g2.at(dx + radius, dy + radius) = std::exp(-r2 / (2.0 * sigma2 * sigma2));
      s1 += g1.at(dx + radius, dy + radius);
      s2 += g2.at(dx + radius, dy + radius);
    }
  for (int i = 0; i < (2 * radius + 1) * (2 * radius + 1); ++i)
    out.values[i] = g1.values[i] / s1 - g2.values[i] / s2;
  return out;
}

RealRaster dog_filter_direct(const RealRaster& in, double sigma1, double sigma2) {
  const int radius = static_cast<int>(std::ceil(3.5 * sigma2));
  return conv2d_direct(in, dog_kernel_direct(sigma1, sigma2, radius));
}

RealRaster local_normalize_direct(const RealRaster& in, int window, double c) {
  const int r = window / 2;
  RealRaster out(in.width, in.height);
  for (int y = 0; y < in.height; ++y) {
    for (int x = 0; x < in.width; ++x) {
      double sum = 0.0, sumsq = 0.0;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
          const double v = in.at(mirror_index(x + dx, in.width), mirror_index(y + dy, in.height));
          sum += v;
          sumsq += v * v;
        }
      const double n = double(window) * window;
      const double m = sum / n;
      const double var = sumsq / n - m * m;
      out.at(x, y) = var < 1e-12 ? 128.0 : c * (in.at(x, y) - m) / std::sqrt(var) + 128.0;
    }
  }
  return out;
}

double gabor_response_direct(const RealRaster& raster, double px, double py, double sigma,
                             double kmax, int mu, int nu) {
  const double k = kmax / std::pow(2.0, nu / 2.0);
  const double phi = kPi * mu / 8.0;
  const double kx = k * std::cos(phi), ky = k * std::sin(phi);
  const int r = static_cast<int>(std::ceil(3.0 * sigma / k));
  // kappa from the truncated sums
  double env_sum = 0.0;
  std::complex<double> osc_sum = 0.0;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx) {
      const double r2 = double(dx) * dx + double(dy) * dy;
      const double env = (k * k / (sigma * sigma)) * std::exp(-k * k * r2 / (2 * sigma * sigma));
      env_sum += env;
      osc_sum += env * std::exp(std::complex<double>(0.0, kx * dx + ky * dy));
    }
  const std::complex<double> kappa = osc_sum / env_sum;

  const int cx = static_cast<int>(std::lround(px));
  const int cy = static_cast<int>(std::lround(py));
  std::complex<double> acc = 0.0;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx) {
      const int x = cx + dx, y = cy + dy;
      if (x < 0 || x >= raster.width || y < 0 || y >= raster.height) continue;
      const double r2 = double(dx) * dx + double(dy) * dy;
      const double env = (k * k / (sigma * sigma)) * std::exp(-k * k * r2 / (2 * sigma * sigma));
      const std::complex<double> w =
          env * (std::exp(std::complex<double>(0.0, kx * dx + ky * dy)) - kappa);
      acc += w * raster.at(x, y);
    }
  return std::abs(acc);
}

RawJet raw_jet_direct(const RealRaster& raster, const Minutia& m, double sigma, double kmax,
                      double radius) {
  RawJet jet;
  int idx = 0;
  for (int p = 0; p < 9; ++p) {
    double px = m.x, py = m.y;
    if (p > 0) {
      const double a = m.theta + (p - 1) * (kPi / 4.0);
      px += radius * std::cos(a);
      py += radius * std::sin(a);
    }
    for (int nu = 0; nu < 5; ++nu)
      for (int mu = 0; mu < 8; ++mu)
        jet.values[idx++] = gabor_response_direct(raster, px, py, sigma, kmax, mu, nu);
  }
  return jet;
}

std::vector<RawJet> raw_jets_serial(const RealRaster& raster, const std::vector<Minutia>& minutiae,
                                    const GaborBank& bank, double radius) {
  std::vector<RawJet> jets(minutiae.size());
  for (size_t i = 0; i < minutiae.size(); ++i) jets[i] = raw_jet(raster, minutiae[i], bank, radius);
  return jets;
}

std::vector<double> project_direct(const RawJet& jet, const std::vector<double>& mean,
                                   const std::vector<std::vector<double>>& matrix) {
  const size_t out_dim = matrix.empty() ? 0 : matrix[0].size();
  std::vector<double> out(out_dim, 0.0);
  for (size_t c = 0; c < out_dim; ++c) {
    double acc = 0.0;
    for (size_t r = 0; r < matrix.size(); ++r) acc += matrix[r][c] * (jet.values[r] - mean[r]);
    out[c] = acc;
  }
  return out;
}

namespace {

std::vector<double> candidates(const ScoreSet& s) {
  std::vector<double> t = s.genuine;
  t.insert(t.end(), s.impostor.begin(), s.impostor.end());
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

double far_at(const ScoreSet& s, double t) {
  size_t n = 0;
  for (double v : s.impostor) n += v >= t ? 1 : 0;
  return double(n) / double(s.impostor.size());
}

double frr_at(const ScoreSet& s, double t) {
  size_t n = 0;
  for (double v : s.genuine) n += v < t ? 1 : 0;
  return double(n) / double(s.genuine.size());
}

}  // namespace

double eer_sweep(const ScoreSet& s) {
  double best_gap = std::numeric_limits<double>::infinity();
  double best = 0.5;
  for (double t : candidates(s)) {
    const double far = far_at(s, t), frr = frr_at(s, t);
    if (std::fabs(far - frr) < best_gap) {
      best_gap = std::fabs(far - frr);
      best = (far + frr) / 2.0;
    }
  }
  return best;
}

FrrAtFarResult frr_at_far_sweep(const ScoreSet& s, double far_target) {
  FrrAtFarResult out;
  const double max_imp = *std::max_element(s.impostor.begin(), s.impostor.end());
  if (double(s.impostor.size()) * far_target < 1.0) {
    out.resolution_limited = true;
    out.threshold = std::nextafter(max_imp, std::numeric_limits<double>::infinity());
    out.frr = frr_at(s, out.threshold);
    return out;
  }
  for (double t : candidates(s)) {
    if (far_at(s, t) <= far_target) {
      out.threshold = t;
      out.frr = frr_at(s, t);
      return out;
    }
  }
  out.threshold = std::nextafter(max_imp, std::numeric_limits<double>::infinity());
  out.frr = frr_at(s, out.threshold);
  return out;
}

int crossing_number_bruteforce(const std::array<std::uint8_t, 9>& p) {
  // walk the ring clockwise starting north, counting changes
  static constexpr int ring[8] = {1, 2, 5, 8, 7, 6, 3, 0};
  int changes = 0;
  for (int i = 0; i < 8; ++i) {
    const bool a = p[ring[i]] != 0;
    const bool b = p[ring[(i + 1) % 8]] != 0;
    if (a != b) ++changes;
  }
  return changes / 2;
}

}  // namespace minudesc::ref
