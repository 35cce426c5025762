#include <doctest.h>

#include "minudesc/enhance.hpp"
#include "reference.hpp"
#include "testutil.hpp"

using namespace minudesc;

TEST_CASE("dog kernel entries sum to zero") {
  for (auto [s1, s2] : {std::pair{1.0, 4.0}, {0.8, 2.5}, {2.0, 9.0}}) {
    const RealRaster k = dog_kernel(s1, s2);
    double sum = 0.0;
    for (double v : k.values) sum += v;
    CHECK(std::fabs(sum) <= 1e-9);
  }
}

TEST_CASE("dog_filter rejects bad sigmas") {
  const RealRaster img(32, 32, 1.0);
  CHECK_THROWS_AS(dog_filter(img, 4.0, 1.0), Error);
  CHECK_THROWS_AS(dog_filter(img, -1.0, 2.0), Error);
  CHECK_THROWS_AS(dog_filter(img, 2.0, 2.0), Error);
  try {
    dog_filter(img, 4.0, 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_parameter);
  }
}

TEST_CASE("dog_filter of a constant image is zero") {
  const GrayImage img(40, 40, 128);
  const RealRaster out = dog_filter(img, 1.0, 4.0);
  for (double v : out.values) CHECK(std::fabs(v) <= 1e-9);
}

TEST_CASE("dog_filter impulse response equals the sampled kernel") {
  const int n = 64;
  RealRaster img(n, n, 0.0);
  img.at(n / 2, n / 2) = 1.0;
  const RealRaster out = dog_filter(img, 1.0, 4.0);
  const RealRaster k = dog_kernel(1.0, 4.0);
  const int r = (k.width - 1) / 2;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx)
      CHECK(out.at(n / 2 + dx, n / 2 + dy) ==
            doctest::Approx(k.at(dx + r, dy + r)).epsilon(0).scale(1e-12));
}

TEST_CASE("dog_filter matches the direct convolution oracle") {
  const RealRaster img = test::random_raster(32, 32, 42);
  const RealRaster got = dog_filter(img, 1.0, 4.0);
  const RealRaster want = ref::dog_filter_direct(img, 1.0, 4.0);
  double max_diff = 0.0;
  for (size_t i = 0; i < got.values.size(); ++i)
    max_diff = std::max(max_diff, std::fabs(got.values[i] - want.values[i]));
  CHECK(max_diff <= 1e-9);
}

TEST_CASE("dog_filter is linear") {
  const RealRaster x = test::random_raster(40, 40, 1);
  const RealRaster y = test::random_raster(40, 40, 2);
  const double a = 1.7, b = -0.6;
  RealRaster combo(40, 40);
  for (size_t i = 0; i < combo.values.size(); ++i)
    combo.values[i] = a * x.values[i] + b * y.values[i];
  const RealRaster fx = dog_filter(x, 1.0, 3.0);
  const RealRaster fy = dog_filter(y, 1.0, 3.0);
  const RealRaster fc = dog_filter(combo, 1.0, 3.0);
  for (size_t i = 0; i < combo.values.size(); ++i)
    CHECK(std::fabs(fc.values[i] - (a * fx.values[i] + b * fy.values[i])) <= 1e-9);
}

TEST_CASE("local_normalize of a constant raster is 128 everywhere") {
  const RealRaster img(33, 41, 77.5);
  const RealRaster out = local_normalize(img, 5, 40.0);
  for (double v : out.values) CHECK(v == 128.0);
}

TEST_CASE("local_normalize maps a pixel equal to its window mean to 128") {
  // center equals the mean of its 3x3 window
  RealRaster img(3, 3);
  const double vals[9] = {2, 4, 1, 7, 5, 3, 8, 6, 9};  // mean 5, center 5
  for (int i = 0; i < 9; ++i) img.values[i] = vals[i];
  const RealRaster out = local_normalize(img, 3, 7.0);
  CHECK(out.at(1, 1) == doctest::Approx(128.0).epsilon(1e-12));
}

TEST_CASE("local_normalize center value matches the scalar formula") {
  RealRaster img(3, 3);
  const double vals[9] = {2, 4, 1, 7, 6, 3, 8, 5, 9};  // center 6 != mean
  for (int i = 0; i < 9; ++i) img.values[i] = vals[i];
  double sum = 0, sumsq = 0;
  for (double v : vals) {
    sum += v;
    sumsq += v * v;
  }
  const double m = sum / 9.0;
  const double var = sumsq / 9.0 - m * m;
  const double want = 1.0 * (6.0 - m) / std::sqrt(var) + 128.0;
  const RealRaster out = local_normalize(img, 3, 1.0);
  CHECK(out.at(1, 1) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("local_normalize satisfies the pointwise identity") {
  const RealRaster img = test::random_raster(48, 36, 7);
  const int window = 7;
  const double c = 13.0;
  const RealRaster out = local_normalize(img, window, c);
  const RealRaster want = ref::local_normalize_direct(img, window, c);
  for (size_t i = 0; i < out.values.size(); ++i)
    CHECK(std::fabs(out.values[i] - want.values[i]) <= 1e-9);
}

TEST_CASE("local_normalize validates the window") {
  const RealRaster img(8, 8, 0.0);
  CHECK_THROWS_AS(local_normalize(img, 4, 1.0), Error);
  CHECK_THROWS_AS(local_normalize(img, 1, 1.0), Error);
}

TEST_CASE("enhance of a constant image is 128 everywhere") {
  const GrayImage img(48, 48, 200);
  const RealRaster out = enhance(img, EnhanceParams{});
  for (double v : out.values) CHECK(v == doctest::Approx(128.0).epsilon(1e-9));
}

TEST_CASE("enhance is deterministic") {
  const GrayImage img = test::random_image(64, 64, 9);
  const RealRaster a = enhance(img, EnhanceParams{});
  const RealRaster b = enhance(img, EnhanceParams{});
  CHECK(a.values == b.values);
}

TEST_CASE("enhance yields local standard deviation near c on ridge images") {
  const GrayImage img = test::ridge_image(128, 128, 9.0, 0.4);
  EnhanceParams params;
  const RealRaster out = enhance(img, params);
  const int r = params.window / 2;
  // sample interior windows, away from borders
  for (int cy = 30; cy <= 98; cy += 17) {
    for (int cx = 30; cx <= 98; cx += 17) {
      double sum = 0, sumsq = 0;
      int n = 0;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
          const double v = out.at(cx + dx, cy + dy);
          sum += v;
          sumsq += v * v;
          ++n;
        }
      const double mean = sum / n;
      const double sd = std::sqrt(std::max(0.0, sumsq / n - mean * mean));
      CHECK(sd > 0.8 * params.c);
      CHECK(sd < 1.2 * params.c);
    }
  }
}

TEST_CASE("enhance commutes with integer translation in the interior") {
  // f shifted analytically by (5, 7)
  const int n = 96;
  auto value = [](int x, int y) {
    return 128.0 + 70.0 * std::cos(0.7 * x + 0.31 * y) * std::sin(0.13 * x - 0.45 * y);
  };
  GrayImage a(n, n), b(n, n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      a.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(value(x, y)), 0L, 255L));
      b.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(value(x - 5, y - 7)), 0L, 255L));
    }
  const RealRaster ea = enhance(a, EnhanceParams{});
  const RealRaster eb = enhance(b, EnhanceParams{});
  for (int y = 30; y < n - 30; ++y)
    for (int x = 30; x < n - 30; ++x)
      CHECK(std::fabs(eb.at(x, y) - ea.at(x - 5, y - 7)) <= 1e-9);
}
