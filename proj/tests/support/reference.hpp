#pragma once

// Serial reference implementations used as oracles by the tests and as the
// baseline side of the benchmark. These deliberately use plain nested loops
// and recompute kernels from the defining formulas, independent of the
// library's production code paths.

#include <vector>

#include "minudesc/eval.hpp"
#include "minudesc/gabor.hpp"
#include "minudesc/image.hpp"
#include "minudesc/minutiae.hpp"

namespace minudesc::ref {

// Direct 2-D correlation with mirror borders.
RealRaster conv2d_direct(const RealRaster& in, const RealRaster& kernel);

// DOG kernel built from 2-D (not separably normalized) truncated Gaussians.
RealRaster dog_kernel_direct(double sigma1, double sigma2, int radius);

RealRaster dog_filter_direct(const RealRaster& in, double sigma1, double sigma2);

RealRaster local_normalize_direct(const RealRaster& in, int window, double c);

// Gabor magnitude recomputed from the formula at query time.
double gabor_response_direct(const RealRaster& raster, double px, double py, double sigma,
                             double kmax, int mu, int nu);

RawJet raw_jet_direct(const RealRaster& raster, const Minutia& m, double sigma, double kmax,
                      double radius);

// Serial per-minutia jet loop over the production kernels (the baseline the
// benchmark compares against the OpenMP raw_jets).
std::vector<RawJet> raw_jets_serial(const RealRaster& raster, const std::vector<Minutia>& minutiae,
                                    const GaborBank& bank, double radius);

std::vector<double> project_direct(const RawJet& jet, const std::vector<double>& mean,
                                   const std::vector<std::vector<double>>& matrix);

// Exhaustive threshold sweeps (same candidate/tie conventions as the spec'd
// metrics, brute force over every candidate).
double eer_sweep(const ScoreSet& s);
FrrAtFarResult frr_at_far_sweep(const ScoreSet& s, double far_target);

int crossing_number_bruteforce(const std::array<std::uint8_t, 9>& p);

}  // namespace minudesc::ref
