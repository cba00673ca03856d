#include "gnt/pipeline.hpp"

#include <cctype>
#include <future>
#include <map>
#include <unordered_map>

#include "gnt/classify.hpp"
#include "gnt/error.hpp"

namespace gnt {

namespace {

template <typename F>
auto stage(const char* name, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  } catch (const std::exception& e) {
    throw StageError(name, Error(ErrorCode::IoError, e.what()));
  }
}

std::string file_stem(const std::string& system, Language lang) {
  std::string s;
  for (char c : system) s += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.') ? c : '_';
  return s + "_" + std::string(to_string(lang));
}

}  // namespace

std::vector<SlotScore> score_translations(std::span<const TestInstance> suite,
                                          std::span<const TranslationRecord> records, const Lexicon& lexicon) {
  std::unordered_map<std::string, const TranslationRecord*> by_id;
  for (const auto& r : records) by_id.emplace(r.instance_id, &r);
  std::vector<SlotScore> out;
  for (const auto& inst : suite) {
    auto it = by_id.find(inst.id);
    if (it == by_id.end()) {
      for (const auto& slot : inst.slots) {
        out.push_back({inst.id, slot.slot_index, GenderLabel::Unmatched, "", "untranslated"});
      }
      continue;
    }
    auto scores = classify_instance(inst, it->second->target_text, lexicon);
    out.insert(out.end(), std::make_move_iterator(scores.begin()), std::make_move_iterator(scores.end()));
  }
  return out;
}

PipelineResult run_pipeline(const SuiteManifest& manifest, std::string_view translations,
                            const std::filesystem::path& lexicon_dir, const PipelineConfig& config) {
  PipelineResult result;
  stage("metrics", [&] { return flag_significance(0.0, config.threshold); });

  stage("generate", [&] {
    SuiteManifest m = manifest;
    if (config.seed) m.seed = *config.seed;
    auto generated = generate_suite(m);
    result.suite = std::move(generated.instances);
    result.warnings = std::move(generated.warnings);
    return 0;
  });

  SuiteIndex index(result.suite);
  auto set = stage("parse", [&] { return parse_translations(translations, &index); });
  result.orphan_translations = set.orphans.size();

  using Key = std::pair<std::string, Language>;
  std::map<Key, std::vector<TranslationRecord>> groups;
  std::map<Key, std::uint64_t> orphans;
  for (auto& r : set.records) groups[{r.system_id, r.language}].push_back(std::move(r));
  for (const auto& r : set.orphans) {
    ++orphans[{r.system_id, r.language}];
    groups.try_emplace({r.system_id, r.language});
  }

  std::map<Language, Lexicon> lexicons;
  stage("score", [&] {
    for (const auto& [key, records] : groups) {
      if (!lexicons.count(key.second)) lexicons.emplace(key.second, load_lexicon(key.second, lexicon_dir));
    }
    return 0;
  });

  struct Output {
    std::vector<SlotScore> scores;
    MetricsDocument metrics;
  };
  std::vector<std::pair<Key, std::future<Output>>> jobs;
  for (const auto& [key, records] : groups) {
    const Lexicon& lex = lexicons.at(key.second);
    const auto& recs = records;
    std::uint64_t orphan_count = orphans.count(key) ? orphans.at(key) : 0;
    jobs.emplace_back(key, std::async(std::launch::async, [&, key, orphan_count] {
      Output o;
      o.scores = stage("score", [&] { return score_translations(result.suite, recs, lex); });
      o.metrics = stage("metrics", [&] {
        return compute_metrics(o.scores, result.suite, config.threshold, key.first, std::string(to_string(key.second)));
      });
      o.metrics.coverage.orphan_translations = orphan_count;
      return o;
    }));
  }

  std::vector<std::pair<Key, Output>> outputs;
  for (auto& [key, job] : jobs) outputs.emplace_back(key, job.get());
  for (const auto& [key, o] : outputs) {
    result.metrics.push_back(o.metrics);
    result.reports.push_back(make_report_document(o.metrics));
  }

  if (!config.out_dir.empty()) {
    stage("report", [&] {
      const auto& dir = config.out_dir;
      write_text_file(dir / "suite.jsonl", write_suite(result.suite));
      for (const auto& [key, o] : outputs) {
        auto stem = file_stem(key.first, key.second);
        write_text_file(dir / ("scores_" + stem + ".jsonl"), write_scores(o.scores));
        write_text_file(dir / ("metrics_" + stem + ".json"), write_metrics(o.metrics));
      }
      write_text_file(dir / "report.md", render_report(result.metrics, ReportFormat::Markdown));
      write_text_file(dir / "report.csv", render_report(result.metrics, ReportFormat::Csv));
      return 0;
    });
  }
  return result;
}

}  // namespace gnt
