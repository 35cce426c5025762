// Serial reference kernels vs the OpenMP production paths.
#include <benchmark/benchmark.h>

#include <random>

#include "minudesc/enhance.hpp"
#include "minudesc/gabor.hpp"
#include "minudesc/matching.hpp"
#include "reference.hpp"
#include "testutil.hpp"

using namespace minudesc;

namespace {

const RealRaster& bench_raster() {
  static const RealRaster img = test::random_raster(512, 512, 99);
  return img;
}

const GaborBank& bench_bank() {
  static const GaborBank bank = build_bank(kTwoPi, kPi / 2.0);
  return bank;
}

std::vector<Minutia> bench_minutiae(int n) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(96.0, 416.0), angle(0.0, kTwoPi);
  std::vector<Minutia> out(n);
  for (auto& m : out) m = {pos(rng), pos(rng), angle(rng), MinutiaKind::termination};
  return out;
}

void dog_serial_reference(benchmark::State& state) {
  for (auto _ : state) {
    auto out = ref::dog_filter_direct(bench_raster(), 1.0, 4.0);
    benchmark::DoNotOptimize(out.values.data());
  }
}

void dog_openmp(benchmark::State& state) {
  for (auto _ : state) {
    auto out = dog_filter(bench_raster(), 1.0, 4.0);
    benchmark::DoNotOptimize(out.values.data());
  }
}

void normalize_serial_reference(benchmark::State& state) {
  for (auto _ : state) {
    auto out = ref::local_normalize_direct(bench_raster(), 15, 40.0);
    benchmark::DoNotOptimize(out.values.data());
  }
}

void normalize_openmp(benchmark::State& state) {
  for (auto _ : state) {
    auto out = local_normalize(bench_raster(), 15, 40.0);
    benchmark::DoNotOptimize(out.values.data());
  }
}

void jets_serial_reference(benchmark::State& state) {
  const auto minutiae = bench_minutiae(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto jets = ref::raw_jets_serial(bench_raster(), minutiae, bench_bank(), 18.0);
    benchmark::DoNotOptimize(jets.data());
  }
}

void jets_openmp(benchmark::State& state) {
  const auto minutiae = bench_minutiae(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto jets = raw_jets(bench_raster(), minutiae, bench_bank(), 18.0);
    benchmark::DoNotOptimize(jets.data());
  }
}

Template bench_template(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(40.0, 280.0), angle(0.0, kTwoPi);
  std::normal_distribution<double> desc(0.0, 1.0);
  Template t;
  t.width = t.height = 320;
  for (int i = 0; i < n; ++i) {
    TemplateEntry e;
    e.minutia = {pos(rng), pos(rng), angle(rng), MinutiaKind::termination};
    e.descriptor.resize(25);
    for (double& v : e.descriptor) v = desc(rng);
    t.entries.push_back(std::move(e));
  }
  return t;
}

void match_all_reference_pairs(benchmark::State& state) {
  const Template a = bench_template(30, 1), b = bench_template(30, 2);
  MatchParams params;
  params.pro = 100.0;
  for (auto _ : state) {
    auto r = match(a, b, params);
    benchmark::DoNotOptimize(r.sim);
  }
}

void match_pro3(benchmark::State& state) {
  const Template a = bench_template(30, 1), b = bench_template(30, 2);
  MatchParams params;
  params.pro = 3.0;
  for (auto _ : state) {
    auto r = match(a, b, params);
    benchmark::DoNotOptimize(r.sim);
  }
}

}  // namespace

BENCHMARK(dog_serial_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(dog_openmp)->Unit(benchmark::kMillisecond);
BENCHMARK(normalize_serial_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(normalize_openmp)->Unit(benchmark::kMillisecond);
BENCHMARK(jets_serial_reference)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK(jets_openmp)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK(match_all_reference_pairs)->Unit(benchmark::kMillisecond);
BENCHMARK(match_pro3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
