#pragma once

#include <cstdint>
#include <vector>

#include "minudesc/gabor.hpp"
#include "minudesc/image.hpp"
#include "minudesc/minutiae.hpp"
#include "minudesc/subspace.hpp"

namespace minudesc {

struct JitterParams {
  double max_translation = 15.0;  // px
  double max_rotation = 0.15;     // rad
  double noise_std = 12.0;        // gray levels
  double contrast_min = 0.85;
  double contrast_max = 1.15;
};

enum class RidgePattern { harmonic, whorl };

struct SynthParams {
  std::uint64_t seed = 1;
  int width = 320;
  int height = 320;
  int dpi = 500;
  double ridge_period = 9.0;  // px
  int n_minutiae = 12;
  int impressions = 5;
  JitterParams jitter;
  RidgePattern pattern = RidgePattern::harmonic;

  void validate() const;
};

// Rotation by angle about (cx, cy), then translation by (tx, ty).
struct RigidTransform {
  double angle = 0.0;
  double tx = 0.0, ty = 0.0;
  double cx = 0.0, cy = 0.0;

  void apply(double x, double y, double& ox, double& oy) const;
  void invert(double x, double y, double& ox, double& oy) const;
  Minutia apply(const Minutia& m) const;
};

struct GroundTruth {
  std::vector<Minutia> minutiae;  // in this impression's coordinates
  RigidTransform transform;       // base -> impression
};

struct Impression {
  GrayImage image;
  GroundTruth truth;
};

// Analytic ridge-phase model: smooth base phase plus one spiral term per
// planted minutia. The rendered image is 128 + A*cos(phase).
class PhaseField {
 public:
  struct Spiral {
    double x, y;
    int sign;
  };

  double phase(double x, double y) const;
  void gradient(double x, double y, double& gx, double& gy) const;
  // Ridge-flow orientation (mod pi) of the smooth base field.
  double base_orientation(double x, double y) const;

  // base phase pieces
  RidgePattern pattern = RidgePattern::harmonic;
  double k = 0.0;           // 2*pi/ridge_period
  double gamma = 0.0;       // principal ridge normal direction (harmonic)
  double cx = 0.0, cy = 0.0;  // whorl center
  double phase0 = 0.0;
  struct Harmonic {
    double ax, ay, amp, freq, phase;
  };
  std::vector<Harmonic> harmonics;
  std::vector<Spiral> spirals;
};

// The seeded base field + planted minutiae for one finger, before jitter.
struct FingerModel {
  PhaseField field;
  std::vector<Minutia> minutiae;  // base coordinates, with ground-truth kinds
};

FingerModel make_finger_model(const SynthParams& params);

// Renders `impressions` jittered views of one seeded finger. Deterministic
// per (seed); throws placement_failure if the minutia spacing constraint
// cannot be met (message reports the achieved count).
std::vector<Impression> generate_finger(const SynthParams& params);

// Runs the extraction + jet pipeline over `fingers` generated fingers and
// labels jets by ground-truth minutia identity. Classes with fewer than two
// samples are dropped; throws too_few_classes if fewer than min_classes
// remain.
struct TrainingPipeline {
  EnhanceParams enhance;
  MinutiaeParams minutiae;
  const GaborBank* bank = nullptr;
  double gabor_radius = 18.0;
  double label_pos_tol = 8.0;
  double label_ang_tol = kPi / 6.0;
};

LabeledJetSet build_training_set(int fingers, const SynthParams& params,
                                 const TrainingPipeline& pipeline, int min_classes = 26);

}  // namespace minudesc
