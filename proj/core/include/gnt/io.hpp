#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gnt/classify.hpp"
#include "gnt/language.hpp"
#include "gnt/metrics.hpp"
#include "gnt/suite.hpp"

namespace gnt {

struct TranslationRecord {
  std::string system_id;
  Language language = Language::ES;
  std::string instance_id;
  std::string target_text;

  bool operator==(const TranslationRecord&) const = default;
};

struct TranslationSet {
  std::vector<TranslationRecord> records;
  std::vector<TranslationRecord> orphans;  // ids the suite does not know; never scored
};

// Line-delimited files. Writers emit one object per line with a fixed key
// order; parsers accept any key order and throw ParseError with the line.
std::string write_suite(std::span<const TestInstance> suite);
std::vector<TestInstance> parse_suite(std::string_view text, std::string_view source = "suite");

std::string write_scores(std::span<const SlotScore> scores);
std::vector<SlotScore> parse_scores(std::string_view text, std::string_view source = "scores");

std::string write_translations(std::span<const TranslationRecord> records);
// Without a suite every record is kept. Duplicate (system, lang, id) throws
// DuplicateRecord naming both lines.
TranslationSet parse_translations(std::string_view text, const SuiteIndex* suite = nullptr,
                                  std::string_view source = "translations");

std::string write_manifest(const SuiteManifest& manifest);
SuiteManifest parse_manifest(std::string_view text);  // throws InvalidManifest

std::string write_metrics(const MetricsDocument& doc);
MetricsDocument parse_metrics(std::string_view text);
// Accepts a single document or an array of documents.
std::vector<MetricsDocument> parse_metrics_set(std::string_view text);
std::string write_metrics_set(std::span<const MetricsDocument> docs);

std::string read_text_file(const std::filesystem::path& path);
// Writes through a temporary file in the same directory, then renames.
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace gnt
