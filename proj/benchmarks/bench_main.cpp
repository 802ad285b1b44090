#include <benchmark/benchmark.h>

#include <vector>

#include "doclay/geometry.hpp"
#include "doclay/pipeline.hpp"
#include "doclay/prompt.hpp"
#include "doclay/synthetic.hpp"
#include "doclay/xycut.hpp"

namespace {

using namespace doclay;

std::vector<BBox> random_boxes(std::size_t n) {
  Rng rng(1);
  std::vector<BBox> out;
  for (std::size_t i = 0; i < n; ++i) {
    const int l = static_cast<int>(rng.uniform_int(0, 900));
    const int t = static_cast<int>(rng.uniform_int(0, 900));
    out.push_back({l, t, l + static_cast<int>(rng.uniform_int(0, 100)), t + static_cast<int>(rng.uniform_int(0, 100))});
  }
  return out;
}

void BM_MinDistance(benchmark::State& state) {
  const auto boxes = random_boxes(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(min_distance(boxes[i & 1023], boxes[(i * 7 + 3) & 1023]));
    ++i;
  }
}
BENCHMARK(BM_MinDistance);

void BM_XyCut(benchmark::State& state) {
  Rng rng(2);
  const auto cols = static_cast<std::size_t>(state.range(0));
  const auto table = synthetic::table(rng, 8, cols, "bench");
  for (auto _ : state) benchmark::DoNotOptimize(xy_cut(table.page.segments));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(table.page.size()));
}
BENCHMARK(BM_XyCut)->Arg(2)->Arg(6);

void BM_GeneratePage(benchmark::State& state) {
  Rng rng(3);
  const DocumentPage page = ingest_page(synthetic::raw_document(rng, "bench"));
  PipelineConfig config;
  config.records_per_page = 4;
  for (auto _ : state) benchmark::DoNotOptimize(generate_page(page, config));
}
BENCHMARK(BM_GeneratePage);

void BM_MeasurePage(benchmark::State& state) {
  Rng rng(4);
  const DocumentPage page = synthetic::text_page(rng, "bench", static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(measure_page(page));
}
BENCHMARK(BM_MeasurePage)->Arg(10)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
