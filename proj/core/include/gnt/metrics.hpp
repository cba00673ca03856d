#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "gnt/classify.hpp"
#include "gnt/suite.hpp"

namespace gnt {

inline constexpr double kDefaultThreshold = 0.07;

// Proportions over classified slots. Unmatched slots are kept out of the
// denominator and reported as u = u_count / (count + u_count).
struct StrategyBreakdown {
  double m = 0, f = 0, n = 0;
  std::optional<std::array<double, 5>> strategies;  // n1..n5; absent for bare triplets
  double u = 0;
  std::uint64_t count = 0;
  std::uint64_t u_count = 0;

  bool empty() const { return count == 0; }

  // counts indexed by GenderLabel (M, F, N1..N5, U)
  static StrategyBreakdown from_counts(const std::array<std::uint64_t, 8>& counts);
  static StrategyBreakdown from_triplet(double m, double f, double n);
  static StrategyBreakdown from_strategies(double m, double f, const std::array<double, 5>& n_i);

  bool operator==(const StrategyBreakdown&) const = default;
};

struct ResponseReport {
  StrategyBreakdown det;
  StrategyBreakdown amb;
  double delta_m = 0, delta_f = 0, delta_n = 0;
  std::optional<std::array<double, 5>> delta_ni;
  bool significant_m = false;
  bool significant_n = false;

  bool operator==(const ResponseReport&) const = default;
};

struct StereotypeReport {
  StrategyBreakdown neutral, stereo_m, stereo_f;
  double delta_g_avg = 0;
  double delta_n_avg = 0;

  bool operator==(const StereotypeReport&) const = default;
};

bool flag_significance(double delta, double threshold);  // throws InvalidThreshold

using SlotFilter = std::function<bool(TemplateFamily, const GenderCondition&, const StereotypeCondition&)>;

// Slot metadata lookup for score lists.
class SuiteIndex {
 public:
  explicit SuiteIndex(std::span<const TestInstance> suite);
  const TestInstance* find(std::string_view id) const;
  const AdjectiveSlot* slot(std::string_view id, std::size_t index) const;
  std::span<const TestInstance> instances() const { return suite_; }

 private:
  std::span<const TestInstance> suite_;
  std::unordered_map<std::string, const TestInstance*> by_id_;
};

// Throws EmptySelection if no slot passes the filter, ParseError if a score
// names an instance or slot the suite does not have.
StrategyBreakdown aggregate(std::span<const SlotScore> scores, const SuiteIndex& suite, const SlotFilter& filter);

ResponseReport paired_response(const StrategyBreakdown& det, const StrategyBreakdown& amb,
                               double threshold = kDefaultThreshold);

StrategyBreakdown mean_breakdown(std::span<const StrategyBreakdown> parts);

ResponseReport macro_average(const std::vector<std::pair<std::string, ResponseReport>>& reports,
                             double threshold = kDefaultThreshold);

StereotypeReport compute_stereotype_effect(const StrategyBreakdown& neutral, const StrategyBreakdown& stereo_m,
                                           const StrategyBreakdown& stereo_f);

struct CoverageEntry {
  std::uint64_t classified = 0;
  std::uint64_t unmatched = 0;
  double u = 0;

  bool operator==(const CoverageEntry&) const = default;
};

struct Coverage {
  CoverageEntry total;
  std::map<std::string, CoverageEntry> by_condition;  // quota key, e.g. "T3-Amb"
  std::uint64_t orphan_translations = 0;
  std::uint64_t untranslated_instances = 0;

  bool operator==(const Coverage&) const = default;
};

struct GroupedResponse {
  ResponseReport report;
  std::vector<std::string> groups;  // template groups the mean runs over
  std::map<std::string, ResponseReport> per_group;

  bool operator==(const GroupedResponse&) const = default;
};

struct MetricsDocument {
  std::string system;
  std::string language;
  double threshold = kDefaultThreshold;
  std::optional<StrategyBreakdown> baseline;        // determined slots, mean over template groups
  std::optional<GroupedResponse> omission_response;
  std::optional<ResponseReport> active_response;
  std::optional<StereotypeReport> stereotype;
  Coverage coverage;

  bool operator==(const MetricsDocument&) const = default;
};

// Template groups pairing a known-gender family with its partial-gender
// counterpart; each group's Det slots are compared against its Amb slots.
struct TemplateGroup {
  std::string name;
  std::vector<TemplateFamily> families;
};
const std::vector<TemplateGroup>& omission_groups();

MetricsDocument compute_metrics(std::span<const SlotScore> scores, std::span<const TestInstance> suite,
                                double threshold = kDefaultThreshold, std::string system = {},
                                std::string language = {});

}  // namespace gnt
