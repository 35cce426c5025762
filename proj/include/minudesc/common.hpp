#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace minudesc {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Error categories surfaced by the library. Each operation documents which
// of these it can raise.
enum class Errc {
  invalid_parameter,
  dimension_mismatch,
  insufficient_samples,
  too_few_classes,
  too_few_samples_per_class,
  degenerate_scatter,
  empty_template,
  empty_foreground,
  insufficient_data,
  placement_failure,
  malformed_file,
  version_mismatch,
  io_error,
  invalid_config,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

// Wraps an angle to [0, 2*pi).
inline double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0) a += kTwoPi;
  return a;
}

// Wraps to (-pi, pi].
inline double wrap_signed(double a) {
  a = std::fmod(a, kTwoPi);
  if (a <= -kPi) a += kTwoPi;
  if (a > kPi) a -= kTwoPi;
  return a;
}

// Circular distance between two directions, in [0, pi].
inline double angle_distance(double a, double b) {
  return std::fabs(wrap_signed(a - b));
}

// Distance between two undirected orientations (mod pi), in [0, pi/2].
inline double orientation_distance(double a, double b) {
  double d = std::fabs(wrap_signed(2.0 * (a - b))) / 2.0;
  return d;
}

// splitmix64; used to derive independent RNG streams from (seed, indices).
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
  return mix64(mix64(mix64(seed ^ mix64(a)) ^ mix64(b)) ^ mix64(c));
}

}  // namespace minudesc
