#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gnt/io.hpp"
#include "gnt/lexicon.hpp"
#include "gnt/metrics.hpp"
#include "gnt/report.hpp"
#include "gnt/suite.hpp"

namespace gnt {

// Scores every slot of the suite. Instances without a translation get
// Unmatched scores with rule "untranslated". Records for other ids are ignored.
std::vector<SlotScore> score_translations(std::span<const TestInstance> suite,
                                          std::span<const TranslationRecord> records, const Lexicon& lexicon);

struct PipelineConfig {
  double threshold = kDefaultThreshold;
  std::optional<std::uint64_t> seed;  // overrides the manifest seed
  std::filesystem::path out_dir;      // empty: nothing is written
};

struct PipelineResult {
  std::vector<TestInstance> suite;
  std::vector<std::string> warnings;
  std::vector<MetricsDocument> metrics;  // one per (system, language), sorted
  std::vector<ReportDocument> reports;
  std::size_t orphan_translations = 0;
};

// generate -> score -> metrics -> report. Failures are rethrown as
// StageError tagged "generate", "parse", "score", "metrics" or "report".
PipelineResult run_pipeline(const SuiteManifest& manifest, std::string_view translations,
                            const std::filesystem::path& lexicon_dir, const PipelineConfig& config = {});

}  // namespace gnt
