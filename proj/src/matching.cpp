#include "minudesc/matching.hpp"

#include <algorithm>
#include <cmath>

namespace minudesc {

void MatchParams::validate() const {
  if (!(alpha > beta && beta > 0))
    throw Error(Errc::invalid_parameter, "match: requires alpha > beta > 0");
  if (!(pro > 0 && pro <= 100))
    throw Error(Errc::invalid_parameter, "match: requires 0 < pro <= 100");
  if (pos_tol <= 0 || ang_tol <= 0)
    throw Error(Errc::invalid_parameter, "match: tolerances must be positive");
}

double descriptor_similarity(std::span<const double> v1, std::span<const double> v2, double alpha,
                             double beta) {
  if (v1.size() != v2.size())
    throw Error(Errc::dimension_mismatch, "descriptor_similarity: length mismatch");
  double sq = 0.0;
  for (size_t i = 0; i < v1.size(); ++i) {
    double d = v1[i] - v2[i];
    sq += d * d;
  }
  double simd = std::log(alpha / (beta + std::sqrt(sq)));
  return simd > 0.0 ? simd : 0.0;
}

namespace {

struct ScoredPair {
  double simd;
  int i, j;
};

// Descending SimD, ties by (i, j).
bool scored_less(const ScoredPair& a, const ScoredPair& b) {
  if (a.simd != b.simd) return a.simd > b.simd;
  if (a.i != b.i) return a.i < b.i;
  return a.j < b.j;
}

std::vector<ScoredPair> all_pairs_simd(const Template& t1, const Template& t2,
                                       const MatchParams& params) {
  const int n1 = static_cast<int>(t1.size()), n2 = static_cast<int>(t2.size());
  std::vector<ScoredPair> pairs(static_cast<size_t>(n1) * n2);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      double s = descriptor_similarity(t1.entries[i].descriptor, t2.entries[j].descriptor,
                                       params.alpha, params.beta);
      pairs[static_cast<size_t>(i) * n2 + j] = {s, i, j};
    }
  }
  return pairs;
}

}  // namespace

std::vector<std::pair<int, int>> select_reference_pairs(const Template& t1, const Template& t2,
                                                        const MatchParams& params) {
  params.validate();
  if (t1.entries.empty() || t2.entries.empty())
    throw Error(Errc::empty_template, "select_reference_pairs: empty template");
  const int n1 = static_cast<int>(t1.size()), n2 = static_cast<int>(t2.size());
  std::vector<ScoredPair> pairs = all_pairs_simd(t1, t2, params);
  std::sort(pairs.begin(), pairs.end(), scored_less);
  size_t k = static_cast<size_t>(
      std::floor(double(n1) * double(n2) * params.pro / 100.0));
  k = std::max<size_t>(1, k);
  k = std::min(k, pairs.size());
  std::vector<std::pair<int, int>> out(k);
  for (size_t p = 0; p < k; ++p) out[p] = {pairs[p].i, pairs[p].j};
  return out;
}

std::vector<PairMatch> align_and_pair(const Template& t1, const Template& t2,
                                      std::pair<int, int> ref, const MatchParams& params) {
  const int n1 = static_cast<int>(t1.size()), n2 = static_cast<int>(t2.size());
  if (ref.first < 0 || ref.first >= n1 || ref.second < 0 || ref.second >= n2)
    throw Error(Errc::invalid_parameter, "align_and_pair: reference indices out of range");

  const Minutia& a = t1.entries[ref.first].minutia;
  const Minutia& b = t2.entries[ref.second].minutia;
  const double dtheta = a.theta - b.theta;
  const double ct = std::cos(dtheta), st = std::sin(dtheta);

  // Test minutiae mapped into the enrollment frame.
  std::vector<double> tx(n2), ty(n2), tth(n2);
  for (int j = 0; j < n2; ++j) {
    const Minutia& m = t2.entries[j].minutia;
    const double dx = m.x - b.x, dy = m.y - b.y;
    tx[j] = a.x + ct * dx - st * dy;
    ty[j] = a.y + st * dx + ct * dy;
    tth[j] = wrap_angle(m.theta + dtheta);
  }

  struct Candidate {
    double simd;
    double residual;
    int i, j;
  };
  std::vector<Candidate> cands;
  for (int i = 0; i < n1; ++i) {
    const Minutia& m = t1.entries[i].minutia;
    for (int j = 0; j < n2; ++j) {
      const double dist = std::hypot(m.x - tx[j], m.y - ty[j]);
      if (dist > params.pos_tol) continue;
      if (angle_distance(m.theta, tth[j]) > params.ang_tol) continue;
      const double simd = descriptor_similarity(t1.entries[i].descriptor,
                                                t2.entries[j].descriptor, params.alpha,
                                                params.beta);
      if (params.descriptor_gating && simd < params.simd_threshold) continue;
      cands.push_back({simd, dist, i, j});
    }
  }
  // Greedy one-to-one: by descending SimD with gating, by residual without.
  std::sort(cands.begin(), cands.end(), [&](const Candidate& x, const Candidate& y) {
    if (params.descriptor_gating) {
      if (x.simd != y.simd) return x.simd > y.simd;
    } else {
      if (x.residual != y.residual) return x.residual < y.residual;
    }
    if (x.i != y.i) return x.i < y.i;
    return x.j < y.j;
  });
  std::vector<char> used1(n1, 0), used2(n2, 0);
  std::vector<PairMatch> out;
  for (const Candidate& c : cands) {
    if (used1[c.i] || used2[c.j]) continue;
    used1[c.i] = used2[c.j] = 1;
    out.push_back({c.i, c.j, c.simd});
  }
  return out;
}

double sim1(std::span<const PairMatch> pairs, int n1, int n2, Sim1Variant variant) {
  if (n1 < 1 || n2 < 1) throw Error(Errc::invalid_parameter, "sim1: n1, n2 must be >= 1");
  const double denom = std::max(n1, n2);
  if (variant == Sim1Variant::count) return 100.0 * double(pairs.size()) / denom;
  double sum = 0.0;
  for (const PairMatch& p : pairs) sum += p.simd;
  return 100.0 * sum / denom;
}

double sim2_consistency(std::span<const PairMatch> pairs, const Template& t1,
                        const Template& t2) {
  if (pairs.size() < 2) return 1.0;
  size_t consistent = 0, total = 0;
  for (size_t ai = 0; ai < pairs.size(); ++ai) {
    for (size_t bi = ai + 1; bi < pairs.size(); ++bi) {
      ++total;
      const Minutia& e1 = t1.entries[pairs[ai].enroll_index].minutia;
      const Minutia& e2 = t1.entries[pairs[bi].enroll_index].minutia;
      const Minutia& q1 = t2.entries[pairs[ai].test_index].minutia;
      const Minutia& q2 = t2.entries[pairs[bi].test_index].minutia;
      const double d1 = std::hypot(e1.x - e2.x, e1.y - e2.y);
      const double d2 = std::hypot(q1.x - q2.x, q1.y - q2.y);
      if (std::fabs(d1 - d2) > std::max(5.0, 0.10 * std::max(d1, d2))) continue;
      const double r1 = wrap_signed(e2.theta - e1.theta);
      const double r2 = wrap_signed(q2.theta - q1.theta);
      if (angle_distance(r1, r2) > kPi / 9.0) continue;
      ++consistent;
    }
  }
  return double(consistent) / double(total);
}

MatchResult match(const Template& t1, const Template& t2, const MatchParams& params) {
  params.validate();
  MatchResult result;
  if (t1.entries.empty() || t2.entries.empty()) {
    result.sim1 = 0.0;
    result.sim2 = 1.0;
    result.sim = 0.0;
    return result;
  }
  const int n1 = static_cast<int>(t1.size()), n2 = static_cast<int>(t2.size());
  const auto refs = select_reference_pairs(t1, t2, params);

  std::vector<double> sims(refs.size());
  std::vector<std::vector<PairMatch>> all_pairs(refs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(refs.size()); ++r) {
    all_pairs[r] = align_and_pair(t1, t2, refs[r], params);
    sims[r] = sim1(all_pairs[r], n1, n2, params.sim1_variant);
  }
  size_t best = 0;
  for (size_t r = 1; r < refs.size(); ++r)
    if (sims[r] > sims[best]) best = r;

  result.sim1 = sims[best];
  result.pairs = std::move(all_pairs[best]);
  result.ref_pair = refs[best];
  result.sim2 = sim2_consistency(result.pairs, t1, t2);
  result.sim = result.sim1 * result.sim2;
  return result;
}

}  // namespace minudesc
