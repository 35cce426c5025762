#pragma once

#include "minudesc/config.hpp"
#include "minudesc/subspace.hpp"

namespace minudesc {

// Image -> enhanced raster -> minutiae -> jets -> descriptors. Parameters
// from the config are rescaled to the image dpi.
Template make_template(const GrayImage& img, const Config& cfg, const GaborBank& bank,
                       const SubspaceTransform& transform);

// Extraction plus raw jets (no projection); used by training.
struct ImageFeatures {
  std::vector<Minutia> minutiae;
  std::vector<RawJet> jets;
};

ImageFeatures image_features(const GrayImage& img, const Config& cfg, const GaborBank& bank);

}  // namespace minudesc
