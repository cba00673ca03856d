#include "gnt/report.hpp"

#include <cstdio>

#include "csv.hpp"
#include "gnt/error.hpp"
#include "gnt/io.hpp"

namespace gnt {

namespace {

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  std::string s = buf;
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string bold_if(const std::string& cell, bool on) { return on ? "**" + cell + "**" : cell; }

std::string row(std::initializer_list<std::string> cells) {
  std::string out = "|";
  for (const auto& c : cells) out += " " + c + " |";
  return out + "\n";
}

std::string rule(std::size_t n) {
  std::string out = "|";
  for (std::size_t i = 0; i < n; ++i) out += " --- |";
  return out + "\n";
}

const char* kResponseHeader = "| System | Lang | (M, F, N) Det | (M, F, N) Amb | ΔM | ΔF | ΔN |\n";

std::string response_row(const MetricsDocument& d, const ResponseReport& r) {
  return row({d.system, d.language, format_triplet(r.det), format_triplet(r.amb),
              bold_if(format_delta(r.delta_m), r.significant_m), format_delta(r.delta_f),
              bold_if(format_delta(r.delta_n), r.significant_n)});
}

std::string strategy_cells(const std::optional<std::array<double, 5>>& s, std::string (*fmt)(double)) {
  std::string out;
  for (std::size_t i = 0; i < 5; ++i) out += " " + (s ? fmt((*s)[i]) : std::string("n/a")) + " |";
  return out;
}

std::string baseline_table(std::span<const MetricsDocument> docs) {
  std::string t = "| System | Lang | N_Det | N1 | N2 | N3 | N4 | N5 |\n" + rule(8);
  for (const auto& d : docs) {
    if (!d.baseline) continue;
    t += "| " + d.system + " | " + d.language + " | " + format_proportion(d.baseline->n) + " |" +
         strategy_cells(d.baseline->strategies, format_proportion) + "\n";
  }
  return t;
}

std::string omission_table(std::span<const MetricsDocument> docs) {
  std::string t = std::string(kResponseHeader) + rule(7);
  for (const auto& d : docs) {
    if (d.omission_response) t += response_row(d, d.omission_response->report);
  }
  return t;
}

std::string active_table(std::span<const MetricsDocument> docs) {
  std::string t = std::string(kResponseHeader) + rule(7);
  for (const auto& d : docs) {
    if (d.active_response) t += response_row(d, *d.active_response);
  }
  return t;
}

std::string active_strategy_table(std::span<const MetricsDocument> docs) {
  std::string t = "| System | Lang | ΔN1 | ΔN2 | ΔN3 | ΔN4 | ΔN5 | ΔN |\n" + rule(8);
  for (const auto& d : docs) {
    if (!d.active_response) continue;
    const auto& r = *d.active_response;
    t += "| " + d.system + " | " + d.language + " |" + strategy_cells(r.delta_ni, format_delta) + " " +
         bold_if(format_delta(r.delta_n), r.significant_n) + " |\n";
  }
  return t;
}

std::string stereotype_table(std::span<const MetricsDocument> docs) {
  std::string t =
      "| System | Lang | (M, F, N) Neutral | (M, F, N) StereoM | (M, F, N) StereoF | ΔG_avg | ΔN_avg |\n" + rule(7);
  for (const auto& d : docs) {
    if (!d.stereotype) continue;
    const auto& s = *d.stereotype;
    t += row({d.system, d.language, format_triplet(s.neutral), format_triplet(s.stereo_m), format_triplet(s.stereo_f),
              format_delta(s.delta_g_avg), format_delta(s.delta_n_avg)});
  }
  return t;
}

std::string coverage_table(std::span<const MetricsDocument> docs) {
  std::string t = "| System | Lang | Classified | Unmatched | u | Orphans | Untranslated |\n" + rule(7);
  for (const auto& d : docs) {
    const auto& c = d.coverage;
    t += row({d.system, d.language, std::to_string(c.total.classified), std::to_string(c.total.unmatched),
              fixed(c.total.u, 3), std::to_string(c.orphan_translations), std::to_string(c.untranslated_instances)});
  }
  return t;
}

std::string markdown(std::span<const MetricsDocument> docs) {
  std::string out = "# Gender-neutral translation report\n\n";
  out += "## Omission response (macro-averaged over template groups)\n\n" + omission_table(docs) + "\n";
  out += "## Active response\n\n" + active_table(docs) + "\n";
  out += "### Active response by neutral strategy\n\n" + active_strategy_table(docs) + "\n";
  out += "## Baseline neutrality (determined gender)\n\n" + baseline_table(docs) + "\n";
  out += "## Stereotype effect\n\n" + stereotype_table(docs) + "\n";
  out += "## Coverage\n\n" + coverage_table(docs);
  return out;
}

void csv_line(std::string& out, const MetricsDocument& d, const char* section, const std::string& metric, double value,
              std::optional<bool> significant = std::nullopt) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  out += csv::quote(d.system) + "," + csv::quote(d.language) + "," + section + "," + metric + "," + buf + "," +
         (significant ? (*significant ? "true" : "false") : "") + "\n";
}

void csv_breakdown(std::string& out, const MetricsDocument& d, const char* section, const std::string& prefix,
                   const StrategyBreakdown& b) {
  csv_line(out, d, section, prefix + "m", b.m);
  csv_line(out, d, section, prefix + "f", b.f);
  csv_line(out, d, section, prefix + "n", b.n);
  if (b.strategies) {
    for (std::size_t i = 0; i < 5; ++i) csv_line(out, d, section, prefix + "n" + std::to_string(i + 1), (*b.strategies)[i]);
  }
}

void csv_response(std::string& out, const MetricsDocument& d, const char* section, const ResponseReport& r) {
  csv_breakdown(out, d, section, "det_", r.det);
  csv_breakdown(out, d, section, "amb_", r.amb);
  csv_line(out, d, section, "delta_m", r.delta_m, r.significant_m);
  csv_line(out, d, section, "delta_f", r.delta_f);
  csv_line(out, d, section, "delta_n", r.delta_n, r.significant_n);
  if (r.delta_ni) {
    for (std::size_t i = 0; i < 5; ++i) csv_line(out, d, section, "delta_n" + std::to_string(i + 1), (*r.delta_ni)[i]);
  }
}

std::string comma_separated(std::span<const MetricsDocument> docs) {
  std::string out = "system,language,section,metric,value,significant\n";
  for (const auto& d : docs) {
    if (d.baseline) csv_breakdown(out, d, "baseline", "", *d.baseline);
    if (d.omission_response) csv_response(out, d, "omission", d.omission_response->report);
    if (d.active_response) csv_response(out, d, "active", *d.active_response);
    if (d.stereotype) {
      csv_breakdown(out, d, "stereotype", "neutral_", d.stereotype->neutral);
      csv_breakdown(out, d, "stereotype", "stereo_m_", d.stereotype->stereo_m);
      csv_breakdown(out, d, "stereotype", "stereo_f_", d.stereotype->stereo_f);
      csv_line(out, d, "stereotype", "delta_g_avg", d.stereotype->delta_g_avg);
      csv_line(out, d, "stereotype", "delta_n_avg", d.stereotype->delta_n_avg);
    }
    csv_line(out, d, "coverage", "u", d.coverage.total.u);
  }
  return out;
}

}  // namespace

ReportFormat parse_report_format(std::string_view s) {
  if (s == "md" || s == "markdown") return ReportFormat::Markdown;
  if (s == "csv") return ReportFormat::Csv;
  if (s == "json") return ReportFormat::Json;
  throw Error(ErrorCode::InvalidConfig, "report format must be md, csv or json, got '" + std::string(s) + "'");
}

std::string format_proportion(double x) { return fixed(x, 2); }
std::string format_delta(double x) { return fixed(x, 3); }

std::string format_triplet(const StrategyBreakdown& b) {
  if (b.empty()) return "(empty)";
  return "(" + format_proportion(b.m) + ", " + format_proportion(b.f) + ", " + format_proportion(b.n) + ")";
}

std::string render_report(std::span<const MetricsDocument> docs, ReportFormat format) {
  switch (format) {
    case ReportFormat::Markdown: return markdown(docs);
    case ReportFormat::Csv: return comma_separated(docs);
    case ReportFormat::Json: return docs.empty() ? "[]\n" : write_metrics_set(docs);
  }
  return {};
}

ReportDocument make_report_document(const MetricsDocument& doc) {
  std::span<const MetricsDocument> one(&doc, 1);
  return {doc.system,
          doc.language,
          {{"baseline", baseline_table(one)},
           {"omission", omission_table(one)},
           {"active", active_table(one)},
           {"stereotype", stereotype_table(one)},
           {"coverage", coverage_table(one)}}};
}

}  // namespace gnt
