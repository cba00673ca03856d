#include <benchmark/benchmark.h>

#include <filesystem>

#include "gnt/classify.hpp"
#include "gnt/io.hpp"
#include "gnt/metrics.hpp"
#include "gnt/pipeline.hpp"
#include "gnt/suite.hpp"

using namespace gnt;

namespace {

const std::filesystem::path kData = GNT_BENCH_DATA_DIR;

const SuiteManifest& full_manifest() {
  static const SuiteManifest m = parse_manifest(read_text_file(kData / "demo" / "manifest_full_scale.json"));
  return m;
}

const std::vector<TestInstance>& full_suite() {
  static const auto s = generate_suite(full_manifest()).instances;
  return s;
}

const Lexicon& es_lexicon() {
  static const Lexicon lex = load_lexicon(Language::ES, kData / "demo" / "lexicon");
  return lex;
}

// Source copies give every slot an N4 match after a full lexicon scan.
std::vector<TranslationRecord> echo_records() {
  std::vector<TranslationRecord> out;
  for (const auto& inst : full_suite()) out.push_back({"echo", Language::ES, inst.id, inst.source_text});
  return out;
}

}  // namespace

static void BM_GenerateSuite(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(generate_suite(full_manifest()));
  state.counters["slots"] = static_cast<double>(count_slots(full_suite()));
}
BENCHMARK(BM_GenerateSuite)->Unit(benchmark::kMillisecond);

static void BM_ValidateBalance(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(validate_balance(full_suite(), full_manifest().quotas));
}
BENCHMARK(BM_ValidateBalance)->Unit(benchmark::kMillisecond);

static void BM_ClassifyInstance(benchmark::State& state) {
  const auto& suite = full_suite();
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& inst = suite[i++ % suite.size()];
    benchmark::DoNotOptimize(classify_instance(inst, inst.source_text, es_lexicon()));
  }
}
BENCHMARK(BM_ClassifyInstance);

static void BM_ScoreSuite(benchmark::State& state) {
  auto records = echo_records();
  for (auto _ : state) benchmark::DoNotOptimize(score_translations(full_suite(), records, es_lexicon()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(count_slots(full_suite())));
}
BENCHMARK(BM_ScoreSuite)->Unit(benchmark::kMillisecond);

static void BM_ComputeMetrics(benchmark::State& state) {
  auto scores = score_translations(full_suite(), echo_records(), es_lexicon());
  for (auto _ : state) benchmark::DoNotOptimize(compute_metrics(scores, full_suite(), kDefaultThreshold, "echo", "es"));
}
BENCHMARK(BM_ComputeMetrics)->Unit(benchmark::kMillisecond);

static void BM_SuiteRoundTrip(benchmark::State& state) {
  auto text = write_suite(full_suite());
  for (auto _ : state) benchmark::DoNotOptimize(write_suite(parse_suite(text)));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_SuiteRoundTrip)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
