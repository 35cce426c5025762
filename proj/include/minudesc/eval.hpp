#pragma once

#include <functional>
#include <string>
#include <vector>

#include "minudesc/matching.hpp"

namespace minudesc {

struct ScoreSet {
  std::vector<double> genuine;
  std::vector<double> impostor;
};

struct FingerSet {
  std::string id;
  std::vector<Template> impressions;
};

using ScoreFn = std::function<double(const Template&, const Template&)>;

// FVC pairing: genuine = all unordered within-finger impression pairs,
// impostor = all unordered cross-finger first-impression pairs.
ScoreSet fvc_protocol(const std::vector<FingerSet>& db, const ScoreFn& score);

// Threshold convention for both metrics: candidate thresholds are the
// distinct observed scores; FAR(t) = fraction of impostor >= t,
// FRR(t) = fraction of genuine < t.

// EER = (FAR+FRR)/2 at the candidate minimizing |FAR-FRR| (smallest such
// threshold on ties). No interpolation.
double eer(const ScoreSet& s);

struct FrrAtFarResult {
  double frr = 0.0;
  double threshold = 0.0;
  // True when the impostor count cannot resolve far_target; the threshold
  // is then just above the maximum impostor score.
  bool resolution_limited = false;
};

FrrAtFarResult frr_at_far(const ScoreSet& s, double far_target);

// (FAR, FRR) pairs over all candidate thresholds, for DET plotting.
std::vector<std::pair<double, double>> det_points(const ScoreSet& s);

struct SystemMetrics {
  std::string name;
  double eer = 0.0;
  FrrAtFarResult frr;
  double match_seconds = 0.0;
  ScoreSet scores;
};

struct ExperimentReport {
  std::vector<SystemMetrics> systems;   // system1..3
  std::vector<SystemMetrics> pro_sweep; // system3 at pro = 1..5
  double far_target = 1e-4;
};

// Three-system comparison (baseline count-Sim1, descriptor Sim1 + gating,
// plus reference-pair selection) and a pro sweep mirroring the published
// experiment shapes.
ExperimentReport run_experiment(const std::vector<FingerSet>& db, const MatchParams& base,
                                double far_target, const std::vector<double>& pro_sweep);

// report.txt, scores.tsv (G/I label + score, system 2) and det.tsv.
void write_report_files(const std::string& dir, const ExperimentReport& report);

}  // namespace minudesc
