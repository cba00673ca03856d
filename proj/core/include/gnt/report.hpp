#pragma once

#include <map>
#include <span>
#include <string>

#include "gnt/metrics.hpp"

namespace gnt {

enum class ReportFormat { Markdown, Csv, Json };

ReportFormat parse_report_format(std::string_view s);  // "md", "csv", "json"

// One row per (system, language) in each markdown table; proportions to 2
// decimals, deltas to 3, significant deltas in bold. Json is lossless.
std::string render_report(std::span<const MetricsDocument> docs, ReportFormat format);

struct ReportDocument {
  std::string system_id;
  std::string language;
  std::map<std::string, std::string> tables;  // baseline, omission, active, stereotype, coverage
};

ReportDocument make_report_document(const MetricsDocument& doc);

std::string format_proportion(double x);  // "0.42"
std::string format_delta(double x);       // "-0.267"
std::string format_triplet(const StrategyBreakdown& b);  // "(0.42, 0.36, 0.22)"

}  // namespace gnt
