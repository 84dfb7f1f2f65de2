#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

#include "genreforge/dsp.hpp"
#include "genreforge/features.hpp"
#include "genreforge/forest.hpp"
#include "genreforge/knn.hpp"
#include "genreforge/mlp.hpp"
#include "genreforge/preprocess.hpp"

using namespace genreforge;

namespace {

AudioClip sine_clip(double freq_hz, double seconds, int sample_rate) {
  AudioClip clip;
  clip.sample_rate_hz = sample_rate;
  clip.samples.resize(static_cast<std::size_t>(seconds * sample_rate));
  for (std::size_t t = 0; t < clip.samples.size(); ++t) {
    clip.samples[t] =
        0.5 * std::sin(2.0 * std::numbers::pi * freq_hz * t / sample_rate);
  }
  return clip;
}

Dataset random_dataset(std::size_t n_samples, std::size_t n_features,
                       std::size_t n_classes, std::uint32_t seed) {
  std::mt19937 rng(seed);
  Dataset data;
  for (std::size_t c = 0; c < n_classes; ++c) {
    data.label_names.push_back("c" + std::to_string(c));
  }
  data.features = Matrix(n_samples, n_features);
  data.labels.resize(n_samples);
  for (std::size_t r = 0; r < n_samples; ++r) {
    data.labels[r] = static_cast<int>(rng() % n_classes);
    for (std::size_t f = 0; f < n_features; ++f) {
      data.features(r, f) =
          (static_cast<double>(rng()) / 4294967296.0) * 2.0 - 1.0 +
          (data.labels[r] == static_cast<int>(f % n_classes) ? 2.0 : 0.0);
    }
  }
  return data;
}

void BM_FftMagnitude(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937 rng(1);
  std::vector<double> frame(n);
  for (auto& v : frame) v = static_cast<double>(rng()) / 4294967296.0 - 0.5;
  FftPlan plan(n);
  std::vector<double> mags(n / 2 + 1);
  for (auto _ : state) {
    plan.magnitudes(frame, mags);
    benchmark::DoNotOptimize(mags.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_FftMagnitude)->Arg(512)->Arg(2048)->Arg(8192);

void BM_Stft(benchmark::State& state) {
  const auto clip = sine_clip(440.0, static_cast<double>(state.range(0)), 22050);
  for (auto _ : state) {
    const auto spec = stft(clip, FrameConfig{});
    benchmark::DoNotOptimize(spec.magnitudes.data());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(clip.samples.size()));
}
BENCHMARK(BM_Stft)->Arg(1)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_ExtractFeatures(benchmark::State& state) {
  const auto clip = sine_clip(440.0, static_cast<double>(state.range(0)), 22050);
  for (auto _ : state) {
    const auto fv = extract_features(clip);
    benchmark::DoNotOptimize(fv.values.data());
  }
}
BENCHMARK(BM_ExtractFeatures)->Arg(1)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_KnnPredict(benchmark::State& state) {
  const auto train = random_dataset(static_cast<std::size_t>(state.range(0)),
                                    kFeatureDim, 5, 7);
  const auto model = knn_fit(train, KnnConfig{});
  const auto probes = random_dataset(16, kFeatureDim, 5, 8);
  std::size_t q = 0;
  for (auto _ : state) {
    const auto pred = knn_predict(model, probes.features.row(q % 16));
    benchmark::DoNotOptimize(pred.class_index);
    ++q;
  }
}
BENCHMARK(BM_KnnPredict)->Arg(400)->Arg(2000);

void BM_ForestFit(benchmark::State& state) {
  const auto train = random_dataset(400, kFeatureDim, 5, 9);
  ForestConfig config;
  config.n_estimators = static_cast<std::size_t>(state.range(0));
  config.max_depth = 10;
  for (auto _ : state) {
    const auto model = forest_fit(train, config);
    benchmark::DoNotOptimize(model.trees.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ForestFit)->Arg(25)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_ForestPredict(benchmark::State& state) {
  const auto train = random_dataset(400, kFeatureDim, 5, 10);
  const auto model = forest_fit(
      train, {.n_estimators = 1000, .max_depth = 10, .seed = 11});
  const auto probes = random_dataset(16, kFeatureDim, 5, 12);
  std::size_t q = 0;
  for (auto _ : state) {
    const auto pred = forest_predict(model, probes.features.row(q % 16));
    benchmark::DoNotOptimize(pred.class_index);
    ++q;
  }
}
BENCHMARK(BM_ForestPredict);

void BM_MlpEpoch(benchmark::State& state) {
  const auto train = random_dataset(400, kFeatureDim, 5, 13);
  MlpConfig config;
  config.epochs = 1;
  for (auto _ : state) {
    const auto model = mlp_fit(train, config);
    benchmark::DoNotOptimize(model.loss_curve.data());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(train.n_samples()));
}
BENCHMARK(BM_MlpEpoch)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
