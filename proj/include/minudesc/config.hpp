#pragma once

#include <string>

#include "minudesc/enhance.hpp"
#include "minudesc/matching.hpp"
#include "minudesc/minutiae.hpp"
#include "minudesc/synth.hpp"

namespace minudesc {

// All tunables, loadable from a flat "section.key = value" text file.
struct Config {
  EnhanceParams enhance;
  MinutiaeParams minutiae;
  double gabor_sigma = kTwoPi;
  double gabor_kmax = kPi / 2.0;
  double gabor_radius = 18.0;
  int pca_dim = 30;
  int lda_dim = 25;
  MatchParams match;
  SynthParams synth;
  double eval_far_target = 1e-4;
  std::uint64_t seed = 1;

  void validate() const;  // names the offending key and constraint
};

Config load_config(const std::string& path);
void save_config(const std::string& path, const Config& cfg);

// Default config, or the file named by MINUDESC_CONFIG when set.
Config config_from_env();

}  // namespace minudesc
