#include "minudesc/pipeline.hpp"

namespace minudesc {

ImageFeatures image_features(const GrayImage& img, const Config& cfg, const GaborBank& bank) {
  const EnhanceParams ep = scale_for_dpi(cfg.enhance, img.dpi);
  const MinutiaeParams mp = scale_for_dpi(cfg.minutiae, img.dpi);
  ImageFeatures out;
  out.minutiae = extract_minutiae(img, mp, ep);
  if (out.minutiae.empty()) return out;
  const RealRaster enhanced = enhance(img, ep);
  const double radius = cfg.gabor_radius * double(img.dpi) / 500.0;
  out.jets = raw_jets(enhanced, out.minutiae, bank, radius);
  return out;
}

Template make_template(const GrayImage& img, const Config& cfg, const GaborBank& bank,
                       const SubspaceTransform& transform) {
  ImageFeatures features = image_features(img, cfg, bank);
  Template t;
  t.width = img.width;
  t.height = img.height;
  t.dpi = img.dpi;
  t.entries.reserve(features.minutiae.size());
  for (size_t i = 0; i < features.minutiae.size(); ++i) {
    TemplateEntry e;
    e.minutia = features.minutiae[i];
    e.descriptor = project(l2_normalized(features.jets[i]), transform);
    t.entries.push_back(std::move(e));
  }
  return t;
}

}  // namespace minudesc
