#include "minudesc/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace minudesc {

namespace {

struct Binding {
  std::function<void(Config&, const std::string&)> set;
  std::function<std::string(const Config&)> get;
};

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T v{};
  auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size())
    throw Error(Errc::invalid_config, "config: key '" + key + "' has non-numeric value '" +
                                          value + "'");
  return v;
}

template <>
double parse_number<double>(const std::string& key, const std::string& value) {
  char* end = nullptr;
  double v = std::strtod(value.c_str(), &end);
  if (end != value.c_str() + value.size())
    throw Error(Errc::invalid_config, "config: key '" + key + "' has non-numeric value '" +
                                          value + "'");
  return v;
}

std::string fmt_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

const std::map<std::string, Binding>& bindings() {
  static const std::map<std::string, Binding> table = [] {
    std::map<std::string, Binding> b;
    auto num = [&b](const std::string& key, std::function<double&(Config&)> ref) {
      b[key] = Binding{[key, ref](Config& c, const std::string& v) {
                         ref(c) = parse_number<double>(key, v);
                       },
                       [ref](const Config& c) { return fmt_double(ref(const_cast<Config&>(c))); }};
    };
    auto inum = [&b](const std::string& key, std::function<int&(Config&)> ref) {
      b[key] = Binding{[key, ref](Config& c, const std::string& v) {
                         ref(c) = parse_number<int>(key, v);
                       },
                       [ref](const Config& c) {
                         return std::to_string(ref(const_cast<Config&>(c)));
                       }};
    };

    num("enhance.sigma1", [](Config& c) -> double& { return c.enhance.sigma1; });
    num("enhance.sigma2", [](Config& c) -> double& { return c.enhance.sigma2; });
    inum("enhance.window", [](Config& c) -> int& { return c.enhance.window; });
    num("enhance.c", [](Config& c) -> double& { return c.enhance.c; });

    inum("minutiae.block", [](Config& c) -> int& { return c.minutiae.block; });
    num("minutiae.coherence_threshold",
        [](Config& c) -> double& { return c.minutiae.coherence_threshold; });
    num("minutiae.energy_threshold",
        [](Config& c) -> double& { return c.minutiae.energy_threshold; });
    inum("minutiae.binarize_window", [](Config& c) -> int& { return c.minutiae.binarize_window; });
    num("minutiae.min_spur_length",
        [](Config& c) -> double& { return c.minutiae.min_spur_length; });
    num("minutiae.merge_distance", [](Config& c) -> double& { return c.minutiae.merge_distance; });
    num("minutiae.border_exclusion",
        [](Config& c) -> double& { return c.minutiae.border_exclusion; });

    num("gabor.sigma", [](Config& c) -> double& { return c.gabor_sigma; });
    num("gabor.kmax", [](Config& c) -> double& { return c.gabor_kmax; });
    num("gabor.radius", [](Config& c) -> double& { return c.gabor_radius; });

    inum("subspace.pca_dim", [](Config& c) -> int& { return c.pca_dim; });
    inum("subspace.lda_dim", [](Config& c) -> int& { return c.lda_dim; });

    num("match.alpha", [](Config& c) -> double& { return c.match.alpha; });
    num("match.beta", [](Config& c) -> double& { return c.match.beta; });
    num("match.pro", [](Config& c) -> double& { return c.match.pro; });
    num("match.simd_threshold", [](Config& c) -> double& { return c.match.simd_threshold; });
    num("match.pos_tol", [](Config& c) -> double& { return c.match.pos_tol; });
    num("match.ang_tol", [](Config& c) -> double& { return c.match.ang_tol; });

    inum("synth.width", [](Config& c) -> int& { return c.synth.width; });
    inum("synth.height", [](Config& c) -> int& { return c.synth.height; });
    inum("synth.dpi", [](Config& c) -> int& { return c.synth.dpi; });
    num("synth.ridge_period", [](Config& c) -> double& { return c.synth.ridge_period; });
    inum("synth.n_minutiae", [](Config& c) -> int& { return c.synth.n_minutiae; });
    inum("synth.impressions", [](Config& c) -> int& { return c.synth.impressions; });
    num("synth.max_translation",
        [](Config& c) -> double& { return c.synth.jitter.max_translation; });
    num("synth.max_rotation", [](Config& c) -> double& { return c.synth.jitter.max_rotation; });
    num("synth.noise_std", [](Config& c) -> double& { return c.synth.jitter.noise_std; });
    num("synth.contrast_min", [](Config& c) -> double& { return c.synth.jitter.contrast_min; });
    num("synth.contrast_max", [](Config& c) -> double& { return c.synth.jitter.contrast_max; });

    num("eval.far_target", [](Config& c) -> double& { return c.eval_far_target; });

    b["seed"] = Binding{[](Config& c, const std::string& v) {
                          c.seed = parse_number<std::uint64_t>("seed", v);
                        },
                        [](const Config& c) { return std::to_string(c.seed); }};
    b["synth.pattern"] =
        Binding{[](Config& c, const std::string& v) {
                  if (v == "harmonic")
                    c.synth.pattern = RidgePattern::harmonic;
                  else if (v == "whorl")
                    c.synth.pattern = RidgePattern::whorl;
                  else
                    throw Error(Errc::invalid_config,
                                "config: key 'synth.pattern' must be harmonic or whorl");
                },
                [](const Config& c) {
                  return c.synth.pattern == RidgePattern::harmonic ? "harmonic" : "whorl";
                }};
    return b;
  }();
  return table;
}

void check(bool ok, const std::string& key, const std::string& constraint) {
  if (!ok)
    throw Error(Errc::invalid_config, "config: key '" + key + "' violates: " + constraint);
}

}  // namespace

void Config::validate() const {
  check(enhance.sigma1 > 0 && enhance.sigma2 > enhance.sigma1, "enhance.sigma1",
        "0 < sigma1 < sigma2");
  check(enhance.window >= 3 && enhance.window % 2 == 1, "enhance.window", "odd and >= 3");
  check(enhance.c > 0, "enhance.c", "> 0");
  check(minutiae.block >= 4, "minutiae.block", ">= 4");
  check(minutiae.binarize_window >= 3 && minutiae.binarize_window % 2 == 1,
        "minutiae.binarize_window", "odd and >= 3");
  check(minutiae.merge_distance > 0, "minutiae.merge_distance", "> 0");
  check(minutiae.border_exclusion >= 0, "minutiae.border_exclusion", ">= 0");
  check(gabor_sigma > 0, "gabor.sigma", "> 0");
  check(gabor_kmax > 0 && gabor_kmax <= kPi, "gabor.kmax", "in (0, pi]");
  check(gabor_radius > 0, "gabor.radius", "> 0");
  check(pca_dim > 0 && pca_dim <= 360, "subspace.pca_dim", "in [1, 360]");
  check(lda_dim > 0 && lda_dim <= pca_dim, "subspace.lda_dim", "in [1, pca_dim]");
  check(match.alpha > match.beta && match.beta > 0, "match.alpha", "alpha > beta > 0");
  check(match.pro > 0 && match.pro <= 100, "match.pro", "in (0, 100]");
  check(match.pos_tol > 0, "match.pos_tol", "> 0");
  check(match.ang_tol > 0, "match.ang_tol", "> 0");
  check(synth.width >= 64 && synth.height >= 64, "synth.width", ">= 64");
  check(synth.ridge_period >= 4.0, "synth.ridge_period", ">= 4");
  check(synth.n_minutiae >= 0, "synth.n_minutiae", ">= 0");
  check(synth.impressions >= 1, "synth.impressions", ">= 1");
  check(synth.jitter.contrast_min > 0 &&
            synth.jitter.contrast_min <= synth.jitter.contrast_max,
        "synth.contrast_min", "0 < contrast_min <= contrast_max");
  check(eval_far_target > 0 && eval_far_target < 1, "eval.far_target", "in (0, 1)");
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open config " + path);
  Config cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    // trim
    auto ltrim = line.find_first_not_of(" \t\r");
    if (ltrim == std::string::npos) continue;
    auto rtrim = line.find_last_not_of(" \t\r");
    line = line.substr(ltrim, rtrim - ltrim + 1);
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(Errc::invalid_config,
                  path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    key = key.substr(0, key.find_last_not_of(" \t") + 1);
    const auto vstart = value.find_first_not_of(" \t");
    value = vstart == std::string::npos ? "" : value.substr(vstart);
    auto it = bindings().find(key);
    if (it == bindings().end())
      throw Error(Errc::invalid_config, "config: unknown key '" + key + "'");
    it->second.set(cfg, value);
  }
  cfg.validate();
  return cfg;
}

void save_config(const std::string& path, const Config& cfg) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write config " + path);
  for (const auto& [key, binding] : bindings()) out << key << " = " << binding.get(cfg) << "\n";
}

Config config_from_env() {
  const char* path = std::getenv("MINUDESC_CONFIG");
  if (path && *path) return load_config(path);
  return Config{};
}

}  // namespace minudesc
