// Serial reference against the OpenMP path for the per-pixel kernels, on a
// synthetic hard-difficulty page.
#include <benchmark/benchmark.h>

#include "netlift/net_extraction.hpp"
#include "netlift/pipeline.hpp"
#include "netlift/raster.hpp"
#include "netlift/synth.hpp"
#include "netlift/vectorize.hpp"

using namespace netlift;

namespace {

const SynthResult& page() {
  static const SynthResult r = generate(SynthConfig::preset(Difficulty::Hard, 3));
  return r;
}

Exec mode(const benchmark::State& s) { return s.range(0) ? Exec::Parallel : Exec::Serial; }

void BM_Binarize(benchmark::State& state) {
  const GrayImage& img = page().image;
  for (auto _ : state) benchmark::DoNotOptimize(binarize(img, ThresholdSpec{}, mode(state)));
}

void BM_Skeletonize(benchmark::State& state) {
  const BitMask& m = page().truth.wire_mask;
  for (auto _ : state) benchmark::DoNotOptimize(skeletonize(m, mode(state)));
}

void BM_VectorizeNets(benchmark::State& state) {
  const LabelMap& lm = page().truth.net_pixels;
  VectorizeOptions o;
  o.exec = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(vectorize_nets(lm, o));
}

void BM_Pipeline(benchmark::State& state) {
  PipelineConfig cfg;
  cfg.exec = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(page().image, page().truth.detections, cfg));
}

}  // namespace

// Arg 0 = serial, 1 = parallel.
BENCHMARK(BM_Binarize)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Skeletonize)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VectorizeNets)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Pipeline)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
