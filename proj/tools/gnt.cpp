#include <cstdlib>
#include <iostream>
#include <set>

#include <CLI11.hpp>

#include "gnt/adapter.hpp"
#include "gnt/error.hpp"
#include "gnt/io.hpp"
#include "gnt/lexicon.hpp"
#include "gnt/metrics.hpp"
#include "gnt/pipeline.hpp"
#include "gnt/report.hpp"
#include "gnt/suite.hpp"

namespace {

void emit(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-") {
    std::cout << content;
  } else {
    gnt::write_text_file(out, content);
  }
}

std::string default_lexicon_dir() {
  const char* env = std::getenv("GNT_LEXICON_DIR");
  return env ? env : "";
}

int cmd_generate(const std::string& manifest_path, std::optional<std::uint64_t> seed, const std::string& out) {
  auto manifest = gnt::parse_manifest(gnt::read_text_file(manifest_path));
  if (seed) manifest.seed = *seed;
  auto suite = gnt::generate_suite(manifest);
  for (const auto& w : suite.warnings) std::cerr << "warning: " << w << "\n";
  emit(out, gnt::write_suite(suite.instances));
  std::cerr << suite.instances.size() << " instances, " << gnt::count_slots(suite.instances) << " slots\n";
  return 0;
}

int cmd_validate(const std::string& suite_path, const std::string& manifest_path) {
  auto suite = gnt::parse_suite(gnt::read_text_file(suite_path), suite_path);
  auto diag = manifest_path.empty()
                  ? gnt::validate_balance(suite)
                  : gnt::validate_balance(suite, gnt::parse_manifest(gnt::read_text_file(manifest_path)).quotas);
  for (const auto& [tag, fb] : diag.families) {
    std::cout << tag << ": " << fb.instances << " instances;";
    for (const auto& [cond, n] : fb.slots_by_condition) std::cout << " " << cond << "=" << n;
    std::cout << "; F/M determined " << fb.feminine_slots << "/" << fb.masculine_slots;
    if (fb.narrator_first + fb.narrator_second) {
      std::cout << "; narrator first/second " << fb.narrator_first << "/" << fb.narrator_second;
    }
    for (const auto& [p, n] : fb.pronoun_instances) std::cout << "; " << p << "=" << n;
    if (fb.masculine_cue_slots + fb.feminine_cue_slots) {
      std::cout << "; cues M/F " << fb.masculine_cue_slots << "/" << fb.feminine_cue_slots;
    }
    std::cout << "\n";
  }
  for (const auto& v : diag.violations) {
    std::cout << "violation " << gnt::to_string(v.kind) << " [" << v.family << "]: " << v.detail << "\n";
  }
  std::cout << (diag.ok() ? "ok" : "FAILED") << "\n";
  return diag.ok() ? 0 : 1;
}

int cmd_score(const std::string& suite_path, const std::string& translations_path, const std::string& lexicon_dir,
              const std::string& lang_code, const std::string& system, const std::string& out) {
  if (lexicon_dir.empty()) throw gnt::Error(gnt::ErrorCode::InvalidConfig, "--lexicon-dir or GNT_LEXICON_DIR is required");
  auto lang = gnt::parse_language(lang_code);
  auto suite = gnt::parse_suite(gnt::read_text_file(suite_path), suite_path);
  gnt::SuiteIndex index(suite);
  auto set = gnt::parse_translations(gnt::read_text_file(translations_path), &index, translations_path);
  if (!set.orphans.empty()) std::cerr << "warning: " << set.orphans.size() << " translations name unknown ids\n";

  std::set<std::string> systems;
  for (const auto& r : set.records) {
    if (r.language == lang) systems.insert(r.system_id);
  }
  std::string chosen = system;
  if (chosen.empty()) {
    if (systems.size() > 1) {
      throw gnt::Error(gnt::ErrorCode::InvalidConfig, "translations hold " + std::to_string(systems.size()) +
                                                          " systems for this language; pick one with --system");
    }
    if (!systems.empty()) chosen = *systems.begin();
  }
  std::vector<gnt::TranslationRecord> records;
  for (auto& r : set.records) {
    if (r.language == lang && r.system_id == chosen) records.push_back(std::move(r));
  }
  auto lexicon = gnt::load_lexicon(lang, lexicon_dir);
  auto scores = gnt::score_translations(suite, records, lexicon);
  emit(out, gnt::write_scores(scores));
  return 0;
}

int cmd_metrics(const std::string& scores_path, const std::string& suite_path, double threshold,
                const std::string& system, const std::string& lang, const std::string& out) {
  auto suite = gnt::parse_suite(gnt::read_text_file(suite_path), suite_path);
  auto scores = gnt::parse_scores(gnt::read_text_file(scores_path), scores_path);
  auto doc = gnt::compute_metrics(scores, suite, threshold, system, lang);
  emit(out, gnt::write_metrics(doc));
  return 0;
}

int cmd_report(const std::vector<std::string>& metrics_paths, const std::string& format, const std::string& out) {
  auto fmt = gnt::parse_report_format(format);
  std::vector<gnt::MetricsDocument> docs;
  for (const auto& p : metrics_paths) {
    auto set = gnt::parse_metrics_set(gnt::read_text_file(p));
    docs.insert(docs.end(), set.begin(), set.end());
  }
  emit(out, gnt::render_report(docs, fmt));
  return 0;
}

int cmd_translate(const std::string& suite_path, const std::string& adapter, const std::string& lang,
                  const std::string& system, const std::string& out, std::size_t batch_size, double timeout,
                  unsigned retries, const std::string& token_env) {
  auto suite = gnt::parse_suite(gnt::read_text_file(suite_path), suite_path);
  auto config = gnt::parse_adapter_spec(adapter);
  config.language = gnt::parse_language(lang);
  config.system_id = system;
  config.batch_size = batch_size;
  config.timeout_seconds = timeout;
  config.max_retries = retries;
  config.token_env = token_env;
  if (!out.empty() && out != "-") config.resume_path = out + ".partial";
  auto records = gnt::translate_suite(suite, config);
  emit(out, gnt::write_translations(records));
  return 0;
}

int cmd_run(const std::string& manifest_path, const std::vector<std::string>& translation_paths,
            const std::string& lexicon_dir, const std::string& out_dir, double threshold,
            std::optional<std::uint64_t> seed) {
  if (lexicon_dir.empty()) throw gnt::Error(gnt::ErrorCode::InvalidConfig, "--lexicon-dir or GNT_LEXICON_DIR is required");
  auto manifest = gnt::parse_manifest(gnt::read_text_file(manifest_path));
  std::string translations;
  for (const auto& p : translation_paths) {
    auto text = gnt::read_text_file(p);
    if (!text.empty() && text.back() != '\n') text += '\n';
    translations += text;
  }
  gnt::PipelineConfig config;
  config.threshold = threshold;
  config.seed = seed;
  config.out_dir = out_dir;
  auto result = gnt::run_pipeline(manifest, translations, lexicon_dir, config);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  if (result.orphan_translations) {
    std::cerr << "warning: " << result.orphan_translations << " translations name unknown ids\n";
  }
  std::cerr << result.metrics.size() << " report(s) written to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gender-neutral translation test suites and scoring"};
  app.require_subcommand(1);

  std::string manifest, suite, out, translations, lexicon_dir = default_lexicon_dir(), lang, system, scores, format = "md",
                                                      adapter, out_dir, token_env;
  std::vector<std::string> metrics_paths, translation_paths;
  std::optional<std::uint64_t> seed;
  double threshold = gnt::kDefaultThreshold;
  std::size_t batch_size = 32;
  double timeout = 30.0;
  unsigned retries = 2;

  auto* gen = app.add_subcommand("generate", "Generate a balanced test suite from a manifest");
  gen->add_option("--manifest", manifest, "Manifest JSON")->required();
  gen->add_option("--seed", seed, "Shuffle seed (overrides the manifest)");
  gen->add_option("--out", out, "Suite JSONL output (default stdout)");

  auto* val = app.add_subcommand("validate", "Check a suite's balance properties");
  val->add_option("--suite", suite, "Suite JSONL")->required();
  val->add_option("--manifest", manifest, "Also check counts against this manifest's quotas");

  auto* score = app.add_subcommand("score", "Classify translated adjectives");
  score->add_option("--suite", suite)->required();
  score->add_option("--translations", translations)->required();
  score->add_option("--lexicon-dir", lexicon_dir, "Defaults to $GNT_LEXICON_DIR");
  score->add_option("--lang", lang)->required()->check(CLI::IsMember({"is", "cs", "es"}, CLI::ignore_case));
  score->add_option("--system", system, "System to score when the file holds several");
  score->add_option("--out", out);

  auto* met = app.add_subcommand("metrics", "Aggregate scores into response metrics");
  met->add_option("--scores", scores)->required();
  met->add_option("--suite", suite)->required();
  met->add_option("--threshold", threshold, "Significance threshold on absolute deltas");
  met->add_option("--system", system, "System label for the document");
  met->add_option("--lang", lang, "Language label for the document");
  met->add_option("--out", out);

  auto* rep = app.add_subcommand("report", "Render metrics documents as tables");
  rep->add_option("--metrics", metrics_paths)->required();
  rep->add_option("--format", format)->check(CLI::IsMember({"md", "csv", "json"}));
  rep->add_option("--out", out);

  auto* tr = app.add_subcommand("translate", "Translate a suite through an external backend");
  tr->add_option("--suite", suite)->required();
  tr->add_option("--adapter", adapter, "cmd:\"<command>\" or http:<url>")->required();
  tr->add_option("--lang", lang)->required()->check(CLI::IsMember({"is", "cs", "es"}, CLI::ignore_case));
  tr->add_option("--system", system)->required();
  tr->add_option("--out", out);
  tr->add_option("--batch-size", batch_size)->check(CLI::PositiveNumber);
  tr->add_option("--timeout", timeout, "Seconds per batch")->check(CLI::PositiveNumber);
  tr->add_option("--retries", retries);
  tr->add_option("--token-env", token_env, "HTTP: env var holding a bearer token");

  auto* run = app.add_subcommand("run", "Generate, score, aggregate and report in one go");
  run->add_option("--manifest", manifest)->required();
  run->add_option("--translations", translation_paths)->required();
  run->add_option("--lexicon-dir", lexicon_dir, "Defaults to $GNT_LEXICON_DIR");
  run->add_option("--out-dir", out_dir)->required();
  run->add_option("--threshold", threshold);
  run->add_option("--seed", seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_generate(manifest, seed, out);
    if (*val) return cmd_validate(suite, manifest);
    if (*score) return cmd_score(suite, translations, lexicon_dir, lang, system, out);
    if (*met) return cmd_metrics(scores, suite, threshold, system, lang, out);
    if (*rep) return cmd_report(metrics_paths, format, out);
    if (*tr) return cmd_translate(suite, adapter, lang, system, out, batch_size, timeout, retries, token_env);
    if (*run) return cmd_run(manifest, translation_paths, lexicon_dir, out_dir, threshold, seed);
  } catch (const gnt::StageError& e) {
    std::cerr << "gnt: " << e.what() << "\n";
    return 2;
  } catch (const gnt::Error& e) {
    std::cerr << "gnt: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "gnt: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
