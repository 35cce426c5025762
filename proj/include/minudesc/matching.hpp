#pragma once

#include <span>
#include <utility>
#include <vector>

#include "minudesc/minutiae.hpp"

namespace minudesc {

struct TemplateEntry {
  Minutia minutia;
  std::vector<double> descriptor;
};

// Enrollment/matching unit: minutiae with descriptors plus source image info.
struct Template {
  int width = 0;
  int height = 0;
  int dpi = 500;
  std::vector<TemplateEntry> entries;

  size_t size() const { return entries.size(); }
};

enum class Sim1Variant { count, descriptor };

struct MatchParams {
  double alpha = 100.0;        // SimD numerator constant
  double beta = 1.0;           // SimD offset constant
  double pro = 3.0;            // percent of N1*N2 kept as reference pairs
  double simd_threshold = 0.5; // descriptor gate for correspondence
  double pos_tol = 12.0;       // px
  double ang_tol = kPi / 6.0;  // rad
  bool descriptor_gating = true;           // off for the baseline system
  Sim1Variant sim1_variant = Sim1Variant::descriptor;

  void validate() const;
};

struct PairMatch {
  int enroll_index = -1;
  int test_index = -1;
  double simd = 0.0;
};

struct MatchResult {
  double sim1 = 0.0;
  double sim2 = 1.0;
  double sim = 0.0;  // sim1 * sim2
  std::vector<PairMatch> pairs;
  std::pair<int, int> ref_pair{-1, -1};
};

// SimD = max(0, log(alpha / (beta + ||v1 - v2||))).
double descriptor_similarity(std::span<const double> v1, std::span<const double> v2, double alpha,
                             double beta);

// Top max(1, floor(N1*N2*pro/100)) pairs by SimD, ties broken by (i, j).
std::vector<std::pair<int, int>> select_reference_pairs(const Template& t1, const Template& t2,
                                                        const MatchParams& params);

// Rigid alignment seeded by the reference pair, then greedy one-to-one
// assignment of tolerance-compatible pairs (by descending SimD when gating
// is on, by position residual otherwise).
std::vector<PairMatch> align_and_pair(const Template& t1, const Template& t2,
                                      std::pair<int, int> ref, const MatchParams& params);

double sim1(std::span<const PairMatch> pairs, int n1, int n2, Sim1Variant variant);

// Fraction of correspondence pairs whose inter-minutia distances and
// relative angles agree on both templates; 1.0 for fewer than 2 pairs.
double sim2_consistency(std::span<const PairMatch> pairs, const Template& t1, const Template& t2);

// Full two-stage match: best reference pair by sim1, then sim2 on its pairs.
MatchResult match(const Template& t1, const Template& t2, const MatchParams& params);

}  // namespace minudesc
