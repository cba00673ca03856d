#include "gnt/metrics.hpp"

#include <cmath>
#include <set>

#include "gnt/error.hpp"

namespace gnt {

namespace {

constexpr std::size_t kU = static_cast<std::size_t>(GenderLabel::Unmatched);

double ratio(std::uint64_t a, std::uint64_t b) { return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b); }

}  // namespace

StrategyBreakdown StrategyBreakdown::from_counts(const std::array<std::uint64_t, 8>& c) {
  StrategyBreakdown b;
  b.u_count = c[kU];
  for (std::size_t i = 0; i < kU; ++i) b.count += c[i];
  b.u = ratio(b.u_count, b.count + b.u_count);
  if (b.count == 0) return b;
  b.m = ratio(c[0], b.count);
  b.f = ratio(c[1], b.count);
  std::array<double, 5> s{};
  std::uint64_t neutral = 0;
  for (std::size_t i = 0; i < 5; ++i) {
    s[i] = ratio(c[2 + i], b.count);
    neutral += c[2 + i];
  }
  b.n = ratio(neutral, b.count);
  b.strategies = s;
  return b;
}

StrategyBreakdown StrategyBreakdown::from_triplet(double m, double f, double n) {
  StrategyBreakdown b;
  b.m = m;
  b.f = f;
  b.n = n;
  b.count = 1;
  return b;
}

StrategyBreakdown StrategyBreakdown::from_strategies(double m, double f, const std::array<double, 5>& n_i) {
  StrategyBreakdown b;
  b.m = m;
  b.f = f;
  for (double x : n_i) b.n += x;
  b.strategies = n_i;
  b.count = 1;
  return b;
}

bool flag_significance(double delta, double threshold) {
  if (!(threshold >= 0)) {
    throw Error(ErrorCode::InvalidThreshold, "threshold must be non-negative, got " + std::to_string(threshold));
  }
  return std::fabs(delta) >= threshold;
}

SuiteIndex::SuiteIndex(std::span<const TestInstance> suite) : suite_(suite) {
  by_id_.reserve(suite.size());
  for (const auto& inst : suite) by_id_.emplace(inst.id, &inst);
}

const TestInstance* SuiteIndex::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : it->second;
}

const AdjectiveSlot* SuiteIndex::slot(std::string_view id, std::size_t index) const {
  const auto* inst = find(id);
  if (!inst) return nullptr;
  for (const auto& s : inst->slots) {
    if (s.slot_index == index) return &s;
  }
  return nullptr;
}

StrategyBreakdown aggregate(std::span<const SlotScore> scores, const SuiteIndex& suite, const SlotFilter& filter) {
  std::array<std::uint64_t, 8> counts{};
  std::uint64_t selected = 0;
  for (const auto& s : scores) {
    const auto* inst = suite.find(s.instance_id);
    const auto* slot = inst ? suite.slot(s.instance_id, s.slot_index) : nullptr;
    if (!slot) {
      throw Error(ErrorCode::ParseError, "score for " + s.instance_id + "/" + std::to_string(s.slot_index) +
                                             " has no matching slot in the suite");
    }
    if (filter && !filter(inst->family, slot->gender, slot->stereotype)) continue;
    ++counts[static_cast<std::size_t>(s.label)];
    ++selected;
  }
  if (selected == 0) throw Error(ErrorCode::EmptySelection, "no scored slot passes the filter");
  return StrategyBreakdown::from_counts(counts);
}

ResponseReport paired_response(const StrategyBreakdown& det, const StrategyBreakdown& amb, double threshold) {
  ResponseReport r;
  r.det = det;
  r.amb = amb;
  r.delta_m = amb.m - det.m;
  r.delta_f = amb.f - det.f;
  r.delta_n = amb.n - det.n;
  if (det.strategies && amb.strategies) {
    std::array<double, 5> d{};
    for (std::size_t i = 0; i < 5; ++i) d[i] = (*amb.strategies)[i] - (*det.strategies)[i];
    r.delta_ni = d;
  }
  r.significant_m = flag_significance(r.delta_m, threshold);
  r.significant_n = flag_significance(r.delta_n, threshold);
  return r;
}

StrategyBreakdown mean_breakdown(std::span<const StrategyBreakdown> parts) {
  StrategyBreakdown b;
  if (parts.empty()) return b;
  if (parts.size() == 1) return parts[0];
  const double k = static_cast<double>(parts.size());
  bool all_strategies = true;
  std::array<double, 5> s{};
  for (const auto& p : parts) {
    b.m += p.m;
    b.f += p.f;
    b.n += p.n;
    b.u += p.u;
    b.count += p.count;
    b.u_count += p.u_count;
    if (p.strategies) {
      for (std::size_t i = 0; i < 5; ++i) s[i] += (*p.strategies)[i];
    } else {
      all_strategies = false;
    }
  }
  b.m /= k;
  b.f /= k;
  b.n /= k;
  b.u /= k;
  if (all_strategies) {
    for (auto& x : s) x /= k;
    b.strategies = s;
  }
  return b;
}

ResponseReport macro_average(const std::vector<std::pair<std::string, ResponseReport>>& reports, double threshold) {
  if (reports.empty()) throw Error(ErrorCode::EmptySelection, "macro average over no reports");
  if (reports.size() == 1) return reports.front().second;
  std::set<std::string> seen;
  std::vector<StrategyBreakdown> dets, ambs;
  for (const auto& [name, r] : reports) {
    if (!seen.insert(name).second) {
      throw Error(ErrorCode::DuplicateRecord, "family '" + name + "' contributes twice to a macro average");
    }
    dets.push_back(r.det);
    ambs.push_back(r.amb);
  }
  ResponseReport out;
  out.det = mean_breakdown(dets);
  out.amb = mean_breakdown(ambs);
  const double k = static_cast<double>(reports.size());
  bool all_ni = true;
  std::array<double, 5> d{};
  for (const auto& [name, r] : reports) {
    out.delta_m += r.delta_m;
    out.delta_f += r.delta_f;
    out.delta_n += r.delta_n;
    if (r.delta_ni) {
      for (std::size_t i = 0; i < 5; ++i) d[i] += (*r.delta_ni)[i];
    } else {
      all_ni = false;
    }
  }
  out.delta_m /= k;
  out.delta_f /= k;
  out.delta_n /= k;
  if (all_ni) {
    for (auto& x : d) x /= k;
    out.delta_ni = d;
  }
  out.significant_m = flag_significance(out.delta_m, threshold);
  out.significant_n = flag_significance(out.delta_n, threshold);
  return out;
}

StereotypeReport compute_stereotype_effect(const StrategyBreakdown& neutral, const StrategyBreakdown& stereo_m,
                                           const StrategyBreakdown& stereo_f) {
  StereotypeReport r{neutral, stereo_m, stereo_f, 0, 0};
  r.delta_g_avg = 0.5 * ((stereo_m.m - neutral.m) + (stereo_f.f - neutral.f));
  r.delta_n_avg = 0.5 * ((stereo_m.n - neutral.n) + (stereo_f.n - neutral.n));
  return r;
}

const std::vector<TemplateGroup>& omission_groups() {
  static const std::vector<TemplateGroup> groups = {
      {"T1+T3", {TemplateFamily::T1_OnePersonKnown, TemplateFamily::T3_OnePersonPartial}},
      {"T2+T4", {TemplateFamily::T2_TwoPersonKnown, TemplateFamily::T4_TwoPersonPartial}},
  };
  return groups;
}

MetricsDocument compute_metrics(std::span<const SlotScore> scores, std::span<const TestInstance> suite,
                                double threshold, std::string system, std::string language) {
  flag_significance(0.0, threshold);
  SuiteIndex index(suite);
  MetricsDocument doc;
  doc.system = std::move(system);
  doc.language = std::move(language);
  doc.threshold = threshold;

  // One pass: label counts per quota key.
  std::map<QuotaKey, std::array<std::uint64_t, 8>> counts;
  std::set<std::string> untranslated;
  for (const auto& s : scores) {
    const auto* inst = index.find(s.instance_id);
    const auto* slot = inst ? index.slot(s.instance_id, s.slot_index) : nullptr;
    if (!slot) {
      throw Error(ErrorCode::ParseError, "score for " + s.instance_id + "/" + std::to_string(s.slot_index) +
                                             " has no matching slot in the suite");
    }
    ++counts[quota_key_of(inst->family, *slot)][static_cast<std::size_t>(s.label)];
    if (s.rule == "untranslated") untranslated.insert(s.instance_id);
  }
  doc.coverage.untranslated_instances = untranslated.size();

  auto breakdown = [&](std::initializer_list<QuotaKey> keys) {
    std::array<std::uint64_t, 8> c{};
    for (auto k : keys) {
      auto it = counts.find(k);
      if (it == counts.end()) continue;
      for (std::size_t i = 0; i < 8; ++i) c[i] += it->second[i];
    }
    return StrategyBreakdown::from_counts(c);
  };
  auto group_breakdown = [&](const TemplateGroup& g, QuotaCondition cond) {
    std::array<std::uint64_t, 8> c{};
    for (auto fam : g.families) {
      auto it = counts.find({fam, cond});
      if (it == counts.end()) continue;
      for (std::size_t i = 0; i < 8; ++i) c[i] += it->second[i];
    }
    return StrategyBreakdown::from_counts(c);
  };

  std::vector<StrategyBreakdown> baselines;
  std::vector<std::pair<std::string, ResponseReport>> grouped;
  GroupedResponse omission;
  for (const auto& g : omission_groups()) {
    auto det = group_breakdown(g, QuotaCondition::Det);
    auto amb = group_breakdown(g, QuotaCondition::Amb);
    if (!det.empty()) baselines.push_back(det);
    if (det.empty() || amb.empty()) continue;
    auto r = paired_response(det, amb, threshold);
    grouped.emplace_back(g.name, r);
    omission.groups.push_back(g.name);
    omission.per_group.emplace(g.name, r);
  }
  if (!baselines.empty()) doc.baseline = mean_breakdown(baselines);
  if (!grouped.empty()) {
    omission.report = macro_average(grouped, threshold);
    doc.omission_response = std::move(omission);
  }

  auto t5det = breakdown({{TemplateFamily::T5_CharStereotype, QuotaCondition::Det}});
  auto t5amb = breakdown({{TemplateFamily::T5_CharStereotype, QuotaCondition::Amb}});
  if (!t5det.empty() && !t5amb.empty()) doc.active_response = paired_response(t5det, t5amb, threshold);

  auto none = breakdown({{TemplateFamily::T7_AdverbStereotype, QuotaCondition::None}});
  auto sm = breakdown({{TemplateFamily::T7_AdverbStereotype, QuotaCondition::StereoM}});
  auto sf = breakdown({{TemplateFamily::T7_AdverbStereotype, QuotaCondition::StereoF}});
  if (!none.empty() && !sm.empty() && !sf.empty()) doc.stereotype = compute_stereotype_effect(none, sm, sf);

  for (const auto& [key, c] : counts) {
    CoverageEntry e;
    e.unmatched = c[kU];
    for (std::size_t i = 0; i < kU; ++i) e.classified += c[i];
    e.u = ratio(e.unmatched, e.classified + e.unmatched);
    doc.coverage.by_condition[to_string(key)] = e;
    doc.coverage.total.classified += e.classified;
    doc.coverage.total.unmatched += e.unmatched;
  }
  doc.coverage.total.u =
      ratio(doc.coverage.total.unmatched, doc.coverage.total.classified + doc.coverage.total.unmatched);
  return doc;
}

}  // namespace gnt
