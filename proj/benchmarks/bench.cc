#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "adlens/agenda.h"
#include "adlens/annotation.h"
#include "adlens/entities.h"
#include "adlens/ingest.h"
#include "adlens/random.h"
#include "adlens/stance/pipeline.h"
#include "adlens/store.h"

namespace {

std::string data(const std::string &rel) { return std::string(ADLENS_BENCH_DATA_DIR) + "/" + rel; }

void BM_Alpha(benchmark::State &state) {
  const auto items = static_cast<std::size_t>(state.range(0));
  adlens::Rng rng(1);
  adlens::ReliabilityMatrix m(items, 3);
  for (std::size_t i = 0; i < items; ++i)
    for (std::size_t a = 0; a < 3; ++a) m.set(i, a, 1.0 + static_cast<double>(rng.uniform_index(5)));
  for (auto _ : state)
    benchmark::DoNotOptimize(adlens::krippendorff_alpha(m, adlens::AlphaMetric::kOrdinal));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(items));
}
BENCHMARK(BM_Alpha)->Arg(100)->Arg(1000)->Arg(10000);

void BM_Granger(benchmark::State &state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  adlens::Rng rng(2);
  std::vector<double> x(n), y(n);
  for (std::size_t t = 0; t < n; ++t) {
    x[t] = rng.normal();
    y[t] = (t ? 0.8 * x[t - 1] : 0.0) + rng.normal();
  }
  const adlens::Date start = adlens::Date::FromYmd(2019, 9, 1);
  const adlens::TimeSeries cause("x", start, x), effect("y", start, y);
  for (auto _ : state) benchmark::DoNotOptimize(adlens::granger_test(cause, effect));
}
BENCHMARK(BM_Granger)->Arg(122)->Arg(365)->Arg(3650);

void BM_LoadFixture(benchmark::State &state) {
  const auto manifest = adlens::read_manifest(data("fixtures/manifest.json"));
  for (auto _ : state) benchmark::DoNotOptimize(adlens::load_dataset(manifest.paths));
}
BENCHMARK(BM_LoadFixture)->Unit(benchmark::kMillisecond);

void BM_ResolvePages(benchmark::State &state) {
  const auto gazetteer = adlens::Gazetteer::Load(data("fixtures/gazetteer.psv"));
  const auto pages = adlens::read_pages_file(data("fixtures/pages.jsonl"));
  for (auto _ : state)
    for (const auto &page : pages)
      benchmark::DoNotOptimize(adlens::resolve_page(page.page_id, page.name, gazetteer));
}
BENCHMARK(BM_ResolvePages);

void BM_ClassifyStance(benchmark::State &state) {
  const adlens::stance::PipelineSpec spec;
  adlens::stance::TokenizedCorpus rel_docs, lean_docs;
  std::vector<int> rel, lean;
  for (int i = 0; i < 200; ++i) {
    const int kind = i % 3;
    std::vector<std::string> doc = {"w" + std::to_string(i % 17), "w" + std::to_string(i % 11)};
    if (kind == 1) doc.insert(doc.end(), {"invas", "port"});
    if (kind == 2) doc.insert(doc.end(), {"integr", "accogl"});
    rel_docs.push_back(doc);
    rel.push_back(kind != 0);
    if (kind) {
      lean_docs.push_back(doc);
      lean.push_back(kind == 1);
    }
  }
  const auto p = adlens::stance::StancePipeline::Train(rel_docs, rel, lean_docs, lean, spec, {});
  const std::string text = "Stop invasione: porti chiusi e integrazione negata";
  for (auto _ : state) benchmark::DoNotOptimize(p.classify(text));
}
BENCHMARK(BM_ClassifyStance);

}  // namespace

BENCHMARK_MAIN();
