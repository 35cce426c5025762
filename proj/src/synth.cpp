#include "minudesc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "minudesc/pipeline.hpp"

namespace minudesc {

void SynthParams::validate() const {
  if (width < 64 || height < 64)
    throw Error(Errc::invalid_parameter, "synth: image must be at least 64x64");
  if (ridge_period < 4.0)
    throw Error(Errc::invalid_parameter, "synth: ridge_period must be >= 4 px");
  if (n_minutiae < 0) throw Error(Errc::invalid_parameter, "synth: n_minutiae must be >= 0");
  if (impressions < 1) throw Error(Errc::invalid_parameter, "synth: impressions must be >= 1");
  if (jitter.contrast_min > jitter.contrast_max || jitter.contrast_min <= 0)
    throw Error(Errc::invalid_parameter, "synth: bad contrast range");
}

void RigidTransform::apply(double x, double y, double& ox, double& oy) const {
  const double c = std::cos(angle), s = std::sin(angle);
  const double dx = x - cx, dy = y - cy;
  ox = cx + c * dx - s * dy + tx;
  oy = cy + s * dx + c * dy + ty;
}

void RigidTransform::invert(double x, double y, double& ox, double& oy) const {
  const double c = std::cos(angle), s = std::sin(angle);
  const double dx = x - tx - cx, dy = y - ty - cy;
  ox = cx + c * dx + s * dy;
  oy = cy - s * dx + c * dy;
}

Minutia RigidTransform::apply(const Minutia& m) const {
  Minutia out = m;
  apply(m.x, m.y, out.x, out.y);
  out.theta = wrap_angle(m.theta + angle);
  return out;
}

double PhaseField::phase(double x, double y) const {
  double v = phase0;
  if (pattern == RidgePattern::harmonic) {
    v += k * (x * std::cos(gamma) + y * std::sin(gamma));
    for (const Harmonic& hm : harmonics) v += hm.amp * std::sin(hm.ax * x + hm.ay * y + hm.phase);
  } else {
    v += k * std::hypot(x - cx, y - cy);
  }
  for (const Spiral& sp : spirals) v += sp.sign * std::atan2(y - sp.y, x - sp.x);
  return v;
}

void PhaseField::gradient(double x, double y, double& gx, double& gy) const {
  if (pattern == RidgePattern::harmonic) {
    gx = k * std::cos(gamma);
    gy = k * std::sin(gamma);
    for (const Harmonic& hm : harmonics) {
      const double c = hm.amp * std::cos(hm.ax * x + hm.ay * y + hm.phase);
      gx += c * hm.ax;
      gy += c * hm.ay;
    }
  } else {
    const double r = std::max(1e-9, std::hypot(x - cx, y - cy));
    gx = k * (x - cx) / r;
    gy = k * (y - cy) / r;
  }
  for (const Spiral& sp : spirals) {
    const double dx = x - sp.x, dy = y - sp.y;
    const double r2 = std::max(1e-12, dx * dx + dy * dy);
    gx += -sp.sign * dy / r2;
    gy += sp.sign * dx / r2;
  }
}

double PhaseField::base_orientation(double x, double y) const {
  double gx, gy;
  if (pattern == RidgePattern::harmonic) {
    gx = k * std::cos(gamma);
    gy = k * std::sin(gamma);
    for (const Harmonic& hm : harmonics) {
      const double c = hm.amp * std::cos(hm.ax * x + hm.ay * y + hm.phase);
      gx += c * hm.ax;
      gy += c * hm.ay;
    }
  } else {
    const double r = std::max(1e-9, std::hypot(x - cx, y - cy));
    gx = (x - cx) / r;
    gy = (y - cy) / r;
  }
  double theta = std::atan2(gy, gx) + kPi / 2.0;
  theta = std::fmod(theta, kPi);
  if (theta < 0) theta += kPi;
  return theta;
}

namespace {

// Phase of the field without minutia `skip`'s own spiral.
double phase_excluding(const PhaseField& f, int skip, double x, double y) {
  double v = f.phase0;
  if (f.pattern == RidgePattern::harmonic) {
    v += f.k * (x * std::cos(f.gamma) + y * std::sin(f.gamma));
    for (const auto& hm : f.harmonics) v += hm.amp * std::sin(hm.ax * x + hm.ay * y + hm.phase);
  } else {
    v += f.k * std::hypot(x - f.cx, y - f.cy);
  }
  for (size_t i = 0; i < f.spirals.size(); ++i) {
    if (static_cast<int>(i) == skip) continue;
    v += f.spirals[i].sign * std::atan2(y - f.spirals[i].y, x - f.spirals[i].x);
  }
  return v;
}

void gradient_excluding(const PhaseField& f, int skip, double x, double y, double& gx,
                        double& gy) {
  if (f.pattern == RidgePattern::harmonic) {
    gx = f.k * std::cos(f.gamma);
    gy = f.k * std::sin(f.gamma);
    for (const auto& hm : f.harmonics) {
      const double c = hm.amp * std::cos(hm.ax * x + hm.ay * y + hm.phase);
      gx += c * hm.ax;
      gy += c * hm.ay;
    }
  } else {
    const double r = std::max(1e-9, std::hypot(x - f.cx, y - f.cy));
    gx = f.k * (x - f.cx) / r;
    gy = f.k * (y - f.cy) / r;
  }
  for (size_t i = 0; i < f.spirals.size(); ++i) {
    if (static_cast<int>(i) == skip) continue;
    const double dx = x - f.spirals[i].x, dy = y - f.spirals[i].y;
    const double r2 = std::max(1e-12, dx * dx + dy * dy);
    gx += -f.spirals[i].sign * dy / r2;
    gy += f.spirals[i].sign * dx / r2;
  }
}

// Follows the level line phase = target (mod 2*pi) that terminates at the
// spiral core, by predictor-corrector arc steps; returns the direction of
// the level line's point at radius r_stop, seen from the core.
double trace_level_direction(const PhaseField& f, double x0, double y0, double target,
                             double r_stop) {
  const double r_start = 0.7;
  double best_a = 0.0, best_v = std::numeric_limits<double>::infinity();
  for (double a = 0.0; a < kTwoPi; a += 0.01) {
    const double v =
        std::fabs(wrap_signed(f.phase(x0 + r_start * std::cos(a), y0 + r_start * std::sin(a)) -
                              target));
    if (v < best_v) {
      best_v = v;
      best_a = a;
    }
  }
  double px = x0 + r_start * std::cos(best_a), py = y0 + r_start * std::sin(best_a);
  double ptx = 0.0, pty = 0.0;
  const double step = 0.3;
  for (int it = 0; it < 300; ++it) {
    double gx, gy;
    f.gradient(px, py, gx, gy);
    const double gn = std::max(1e-12, std::hypot(gx, gy));
    double tx = -gy / gn, ty = gx / gn;
    if (it == 0) {
      if (tx * (px - x0) + ty * (py - y0) < 0) {
        tx = -tx;
        ty = -ty;
      }
    } else if (tx * ptx + ty * pty < 0) {
      tx = -tx;
      ty = -ty;
    }
    double qx = px + step * tx, qy = py + step * ty;
    for (int c = 0; c < 6; ++c) {
      const double fv = wrap_signed(f.phase(qx, qy) - target);
      double ggx, ggy;
      f.gradient(qx, qy, ggx, ggy);
      const double g2 = std::max(1e-12, ggx * ggx + ggy * ggy);
      qx -= fv * ggx / g2;
      qy -= fv * ggy / g2;
    }
    ptx = qx - px;
    pty = qy - py;
    const double n = std::max(1e-12, std::hypot(ptx, pty));
    ptx /= n;
    pty /= n;
    px = qx;
    py = qy;
    if (std::hypot(px - x0, py - y0) >= r_stop) break;
  }
  return std::atan2(py - y0, px - x0);
}

}  // namespace

FingerModel make_finger_model(const SynthParams& params) {
  params.validate();
  std::mt19937_64 rng(stream_seed(params.seed, 0x6d6f646c));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  FingerModel model;
  PhaseField& field = model.field;
  field.pattern = params.pattern;
  field.k = kTwoPi / params.ridge_period;
  field.phase0 = unit(rng) * kTwoPi;
  field.gamma = unit(rng) * kTwoPi;
  field.cx = params.width * (0.40 + 0.2 * unit(rng));
  field.cy = params.height * (0.40 + 0.2 * unit(rng));
  if (params.pattern == RidgePattern::harmonic) {
    const double span = std::max(params.width, params.height);
    for (int m = 0; m < 3; ++m) {
      PhaseField::Harmonic hm;
      const double q = (m % 2) + 1;  // low spatial order
      const double beta = unit(rng) * kTwoPi;
      const double wave = kTwoPi * q / span;
      hm.ax = wave * std::cos(beta);
      hm.ay = wave * std::sin(beta);
      // keep the local wave vector within ~12% of k
      hm.amp = 0.04 * field.k / wave;
      hm.phase = unit(rng) * kTwoPi;
      field.harmonics.push_back(hm);
    }
  }

  // Place spiral cores with spacing margin for the phase nudges below.
  const double t = params.ridge_period;
  const double spacing = 4.0 * t;
  const double margin = std::max(2.5 * t, 36.0);
  std::vector<std::array<double, 2>> pos;
  std::vector<int> want_bif, signs;
  for (int m = 0; m < params.n_minutiae; ++m) {
    bool placed = false;
    for (int attempt = 0; attempt < 400 && !placed; ++attempt) {
      const double x = margin + unit(rng) * (params.width - 2 * margin);
      const double y = margin + unit(rng) * (params.height - 2 * margin);
      bool ok = true;
      for (const auto& p : pos)
        if (std::hypot(x - p[0], y - p[1]) < spacing) ok = false;
      if (params.pattern == RidgePattern::whorl &&
          std::hypot(x - field.cx, y - field.cy) < 3.0 * t)
        ok = false;
      if (ok) {
        pos.push_back({x, y});
        want_bif.push_back(m % 2);
        signs.push_back(unit(rng) < 0.5 ? 1 : -1);
        placed = true;
      }
    }
    if (!placed)
      throw Error(Errc::placement_failure,
                  "synth: placed only " + std::to_string(pos.size()) + " of " +
                      std::to_string(params.n_minutiae) + " minutiae");
  }

  for (size_t m = 0; m < pos.size(); ++m)
    field.spirals.push_back({pos[m][0], pos[m][1], signs[m]});

  // Nudge each core along the local wave vector so that the phase invariant
  // chi = psi + sign*angle(grad) sits at -pi/2 (termination) or +pi/2
  // (bifurcation); chi's sign decides which feature the spiral renders.
  for (int iter = 0; iter < 6; ++iter) {
    for (size_t m = 0; m < field.spirals.size(); ++m) {
      auto& sp = field.spirals[m];
      double gx, gy;
      gradient_excluding(field, static_cast<int>(m), sp.x, sp.y, gx, gy);
      const double gn = std::max(1e-12, std::hypot(gx, gy));
      const double psi = phase_excluding(field, static_cast<int>(m), sp.x, sp.y);
      const double chi = wrap_signed(psi + sp.sign * std::atan2(gy, gx));
      const double target = want_bif[m] ? kPi / 2.0 : -kPi / 2.0;
      double err = wrap_signed(target - chi);
      const double max_step = 0.6 * t;
      double delta = err / gn;
      delta = std::clamp(delta, -max_step, max_step);
      sp.x += delta * gx / gn;
      sp.y += delta * gy / gn;
    }
  }

  // Ground truth: kind from the realized chi, direction from the level line
  // (ridge centerline for terminations, valley for bifurcations).
  for (size_t m = 0; m < field.spirals.size(); ++m) {
    const auto& sp = field.spirals[m];
    double gx, gy;
    gradient_excluding(field, static_cast<int>(m), sp.x, sp.y, gx, gy);
    const double psi = phase_excluding(field, static_cast<int>(m), sp.x, sp.y);
    const double chi = wrap_signed(psi + sp.sign * std::atan2(gy, gx));
    const bool bif = chi > 0;
    Minutia gt;
    gt.x = sp.x;
    gt.y = sp.y;
    gt.kind = bif ? MinutiaKind::bifurcation : MinutiaKind::termination;
    const double target = bif ? 0.0 : kPi;
    const double r_stop = bif ? 9.0 : 7.0;
    gt.theta = wrap_angle(trace_level_direction(field, sp.x, sp.y, target, r_stop));
    model.minutiae.push_back(gt);
  }
  return model;
}

std::vector<Impression> generate_finger(const SynthParams& params) {
  const FingerModel model = make_finger_model(params);
  const double amplitude = 80.0;

  std::vector<Impression> out(params.impressions);
  for (int imp = 0; imp < params.impressions; ++imp) {
    std::mt19937_64 rng(stream_seed(params.seed, 0x696d7072, imp));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    RigidTransform tr;
    tr.cx = (params.width - 1) / 2.0;
    tr.cy = (params.height - 1) / 2.0;
    if (imp > 0) {
      tr.angle = (2.0 * unit(rng) - 1.0) * params.jitter.max_rotation;
      tr.tx = (2.0 * unit(rng) - 1.0) * params.jitter.max_translation;
      tr.ty = (2.0 * unit(rng) - 1.0) * params.jitter.max_translation;
    }
    const double contrast =
        params.jitter.contrast_min + unit(rng) * (params.jitter.contrast_max -
                                                  params.jitter.contrast_min);
    const double amp = amplitude * contrast;

    GrayImage img(params.width, params.height, 0, params.dpi);
    std::normal_distribution<double> noise(0.0, params.jitter.noise_std);
    for (int y = 0; y < params.height; ++y) {
      for (int x = 0; x < params.width; ++x) {
        double bx, by;
        tr.invert(x, y, bx, by);
        double v = 128.0 + amp * std::cos(model.field.phase(bx, by));
        if (params.jitter.noise_std > 0) v += noise(rng);
        img.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      }
    }
    GroundTruth truth;
    truth.transform = tr;
    for (const Minutia& m : model.minutiae) truth.minutiae.push_back(tr.apply(m));
    out[imp] = Impression{std::move(img), std::move(truth)};
  }
  return out;
}

LabeledJetSet build_training_set(int fingers, const SynthParams& params,
                                 const TrainingPipeline& pipeline, int min_classes) {
  if (fingers < 1) throw Error(Errc::invalid_parameter, "build_training_set: fingers must be >= 1");
  if (!pipeline.bank) throw Error(Errc::invalid_parameter, "build_training_set: missing bank");

  struct FingerSamples {
    std::vector<RawJet> jets;
    std::vector<int> gt_index;  // index of the matched planted minutia
  };
  std::vector<FingerSamples> per_finger(fingers);

#pragma omp parallel for schedule(dynamic)
  for (int f = 0; f < fingers; ++f) {
    SynthParams fp = params;
    fp.seed = stream_seed(params.seed, 0x66696e67, static_cast<std::uint64_t>(f));
    const auto impressions = generate_finger(fp);
    FingerSamples& samples = per_finger[f];
    for (const Impression& imp : impressions) {
      const auto found = extract_minutiae(imp.image, pipeline.minutiae, pipeline.enhance);
      if (found.empty()) continue;
      const RealRaster enhanced = enhance(imp.image, pipeline.enhance);
      const auto jets = raw_jets(enhanced, found, *pipeline.bank, pipeline.gabor_radius);
      for (size_t i = 0; i < found.size(); ++i) {
        int best = -1;
        double best_d = pipeline.label_pos_tol;
        for (size_t g = 0; g < imp.truth.minutiae.size(); ++g) {
          const Minutia& gt = imp.truth.minutiae[g];
          const double d = std::hypot(found[i].x - gt.x, found[i].y - gt.y);
          if (d < best_d && angle_distance(found[i].theta, gt.theta) <= pipeline.label_ang_tol) {
            best_d = d;
            best = static_cast<int>(g);
          }
        }
        if (best >= 0) {
          samples.jets.push_back(jets[i]);
          samples.gt_index.push_back(best);
        }
      }
    }
  }

  // One class per (finger, planted minutia); drop classes with < 2 samples.
  LabeledJetSet out;
  int next_class = 0;
  for (int f = 0; f < fingers; ++f) {
    const FingerSamples& samples = per_finger[f];
    const int max_gt = samples.gt_index.empty()
                           ? -1
                           : *std::max_element(samples.gt_index.begin(), samples.gt_index.end());
    std::vector<int> count(max_gt + 1, 0), id(max_gt + 1, -1);
    for (int g : samples.gt_index) count[g] += 1;
    for (int g = 0; g <= max_gt; ++g)
      if (count[g] >= 2) id[g] = next_class++;
    for (size_t i = 0; i < samples.jets.size(); ++i) {
      const int cls = id[samples.gt_index[i]];
      if (cls < 0) continue;
      out.jets.push_back(samples.jets[i]);
      out.labels.push_back(cls);
    }
  }
  if (next_class < min_classes)
    throw Error(Errc::too_few_classes, "build_training_set: only " + std::to_string(next_class) +
                                           " usable classes, need " + std::to_string(min_classes));
  return out;
}

}  // namespace minudesc
