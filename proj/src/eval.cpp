#include "minudesc/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace minudesc {

ScoreSet fvc_protocol(const std::vector<FingerSet>& db, const ScoreFn& score) {
  if (db.size() < 2)
    throw Error(Errc::insufficient_data, "fvc_protocol: need at least 2 fingers");
  for (const FingerSet& f : db)
    if (f.impressions.size() < 2)
      throw Error(Errc::insufficient_data,
                  "fvc_protocol: finger " + f.id + " has fewer than 2 impressions");

  struct Pair {
    const Template* a;
    const Template* b;
  };
  std::vector<Pair> genuine_pairs, impostor_pairs;
  for (const FingerSet& f : db)
    for (size_t i = 0; i < f.impressions.size(); ++i)
      for (size_t j = i + 1; j < f.impressions.size(); ++j)
        genuine_pairs.push_back({&f.impressions[i], &f.impressions[j]});
  for (size_t f = 0; f < db.size(); ++f)
    for (size_t g = f + 1; g < db.size(); ++g)
      impostor_pairs.push_back({&db[f].impressions[0], &db[g].impressions[0]});

  ScoreSet out;
  out.genuine.resize(genuine_pairs.size());
  out.impostor.resize(impostor_pairs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(genuine_pairs.size()); ++i)
    out.genuine[i] = score(*genuine_pairs[i].a, *genuine_pairs[i].b);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(impostor_pairs.size()); ++i)
    out.impostor[i] = score(*impostor_pairs[i].a, *impostor_pairs[i].b);
  return out;
}

namespace {

void require_scores(const ScoreSet& s, const char* who) {
  if (s.genuine.empty() || s.impostor.empty())
    throw Error(Errc::insufficient_data, std::string(who) + ": empty score lists");
}

// Candidate thresholds: the distinct observed scores, ascending.
std::vector<double> candidate_thresholds(const ScoreSet& s) {
  std::vector<double> t;
  t.reserve(s.genuine.size() + s.impostor.size());
  t.insert(t.end(), s.genuine.begin(), s.genuine.end());
  t.insert(t.end(), s.impostor.begin(), s.impostor.end());
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

struct Rates {
  std::vector<double> sorted_genuine;
  std::vector<double> sorted_impostor;

  explicit Rates(const ScoreSet& s) : sorted_genuine(s.genuine), sorted_impostor(s.impostor) {
    std::sort(sorted_genuine.begin(), sorted_genuine.end());
    std::sort(sorted_impostor.begin(), sorted_impostor.end());
  }
  double far(double t) const {
    auto it = std::lower_bound(sorted_impostor.begin(), sorted_impostor.end(), t);
    return double(sorted_impostor.end() - it) / double(sorted_impostor.size());
  }
  double frr(double t) const {
    auto it = std::lower_bound(sorted_genuine.begin(), sorted_genuine.end(), t);
    return double(it - sorted_genuine.begin()) / double(sorted_genuine.size());
  }
};

}  // namespace

double eer(const ScoreSet& s) {
  require_scores(s, "eer");
  Rates rates(s);
  const auto thresholds = candidate_thresholds(s);
  double best_gap = std::numeric_limits<double>::infinity();
  double best_eer = 0.5;
  for (double t : thresholds) {
    const double far = rates.far(t), frr = rates.frr(t);
    const double gap = std::fabs(far - frr);
    if (gap < best_gap) {  // strict: ties keep the smallest threshold
      best_gap = gap;
      best_eer = (far + frr) / 2.0;
    }
  }
  return best_eer;
}

FrrAtFarResult frr_at_far(const ScoreSet& s, double far_target) {
  require_scores(s, "frr_at_far");
  if (!(far_target > 0 && far_target < 1))
    throw Error(Errc::invalid_parameter, "frr_at_far: far_target must be in (0, 1)");
  Rates rates(s);
  const double max_impostor = rates.sorted_impostor.back();
  FrrAtFarResult out;
  if (double(rates.sorted_impostor.size()) * far_target < 1.0) {
    // Too few impostors to resolve far_target.
    out.resolution_limited = true;
    out.threshold = std::nextafter(max_impostor, std::numeric_limits<double>::infinity());
    out.frr = rates.frr(out.threshold);
    return out;
  }
  for (double t : candidate_thresholds(s)) {
    if (rates.far(t) <= far_target) {
      out.threshold = t;
      out.frr = rates.frr(t);
      return out;
    }
  }
  out.threshold = std::nextafter(max_impostor, std::numeric_limits<double>::infinity());
  out.frr = rates.frr(out.threshold);
  return out;
}

std::vector<std::pair<double, double>> det_points(const ScoreSet& s) {
  require_scores(s, "det_points");
  Rates rates(s);
  std::vector<std::pair<double, double>> pts;
  for (double t : candidate_thresholds(s)) pts.emplace_back(rates.far(t), rates.frr(t));
  return pts;
}

ExperimentReport run_experiment(const std::vector<FingerSet>& db, const MatchParams& base,
                                double far_target, const std::vector<double>& pro_sweep) {
  ExperimentReport report;
  report.far_target = far_target;

  auto run_system = [&](const std::string& name, const MatchParams& p) {
    SystemMetrics m;
    m.name = name;
    auto t0 = std::chrono::steady_clock::now();
    m.scores = fvc_protocol(
        db, [&p](const Template& a, const Template& b) { return match(a, b, p).sim; });
    m.match_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    m.eer = eer(m.scores);
    m.frr = frr_at_far(m.scores, far_target);
    return m;
  };

  MatchParams p1 = base;
  p1.descriptor_gating = false;
  p1.sim1_variant = Sim1Variant::count;
  p1.pro = 100.0;
  MatchParams p2 = base;
  p2.descriptor_gating = true;
  p2.sim1_variant = Sim1Variant::descriptor;
  p2.pro = 100.0;
  MatchParams p3 = p2;
  p3.pro = base.pro;

  report.systems.push_back(run_system("system1", p1));
  report.systems.push_back(run_system("system2", p2));
  report.systems.push_back(run_system("system3", p3));
  for (double pro : pro_sweep) {
    MatchParams ps = p2;
    ps.pro = pro;
    char name[32];
    std::snprintf(name, sizeof name, "system3-pro%g", pro);
    report.pro_sweep.push_back(run_system(name, ps));
  }
  return report;
}

void write_report_files(const std::string& dir, const ExperimentReport& report) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  auto fmt_line = [](const SystemMetrics& m, double far_target) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-14s EER %8.4f %%   FRR(FAR=%g%%) %8.4f %%%s\n",
                  m.name.c_str(), 100.0 * m.eer, 100.0 * far_target, 100.0 * m.frr.frr,
                  m.frr.resolution_limited ? "   [resolution-limited]" : "");
    return std::string(buf);
  };

  std::ofstream rep(fs::path(dir) / "report.txt");
  if (!rep) throw Error(Errc::io_error, "cannot write report.txt in " + dir);
  rep << "verification report\n";
  for (const SystemMetrics& m : report.systems) rep << fmt_line(m, report.far_target);
  if (!report.pro_sweep.empty()) {
    rep << "\nreference-pair percentage sweep (system3)\n";
    for (const SystemMetrics& m : report.pro_sweep) rep << fmt_line(m, report.far_target);
  }

  // scores.tsv / det.tsv carry the system2 (descriptor) scores.
  const SystemMetrics& sys2 = report.systems.at(1);
  std::ofstream scores(fs::path(dir) / "scores.tsv");
  if (!scores) throw Error(Errc::io_error, "cannot write scores.tsv in " + dir);
  char buf[64];
  for (double v : sys2.scores.genuine) {
    std::snprintf(buf, sizeof buf, "G\t%.9f\n", v);
    scores << buf;
  }
  for (double v : sys2.scores.impostor) {
    std::snprintf(buf, sizeof buf, "I\t%.9f\n", v);
    scores << buf;
  }

  std::ofstream det(fs::path(dir) / "det.tsv");
  if (!det) throw Error(Errc::io_error, "cannot write det.tsv in " + dir);
  for (auto [far, frr] : det_points(sys2.scores)) {
    std::snprintf(buf, sizeof buf, "%.9f\t%.9f\n", far, frr);
    det << buf;
  }
}

}  // namespace minudesc
