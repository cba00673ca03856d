#include "gnt/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "csv.hpp"
#include "gnt/error.hpp"

namespace gnt {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// ---- enum spellings --------------------------------------------------------

std::string_view referent_name(Referent r) { return r == Referent::Speaker ? "Speaker" : "Listener"; }

std::string_view gender_kind_name(GenderKind k) {
  switch (k) {
    case GenderKind::DeterminedMasculine: return "DeterminedMasculine";
    case GenderKind::DeterminedFeminine: return "DeterminedFeminine";
    case GenderKind::Ambiguous: return "Ambiguous";
  }
  return "?";
}

std::string_view ambiguity_name(AmbiguityKind k) {
  switch (k) {
    case AmbiguityKind::None: return "None";
    case AmbiguityKind::Omission: return "Omission";
    case AmbiguityKind::Active: return "Active";
  }
  return "?";
}

std::string_view stereotype_name(StereotypeKind k) {
  switch (k) {
    case StereotypeKind::None: return "None";
    case StereotypeKind::Masculine: return "Masculine";
    case StereotypeKind::Feminine: return "Feminine";
  }
  return "?";
}

template <typename E, std::size_t N>
E parse_enum(const std::string& s, const std::pair<std::string_view, E> (&names)[N], const char* what) {
  for (const auto& [name, value] : names) {
    if (name == s) return value;
  }
  throw Error(ErrorCode::ParseError, std::string("unknown ") + what + " '" + s + "'");
}

Referent parse_referent(const std::string& s) {
  static const std::pair<std::string_view, Referent> names[] = {{"Speaker", Referent::Speaker},
                                                                 {"Listener", Referent::Listener}};
  return parse_enum(s, names, "referent");
}

GenderKind parse_gender_kind(const std::string& s) {
  static const std::pair<std::string_view, GenderKind> names[] = {
      {"DeterminedMasculine", GenderKind::DeterminedMasculine},
      {"DeterminedFeminine", GenderKind::DeterminedFeminine},
      {"Ambiguous", GenderKind::Ambiguous}};
  return parse_enum(s, names, "gender_kind");
}

AmbiguityKind parse_ambiguity(const std::string& s) {
  static const std::pair<std::string_view, AmbiguityKind> names[] = {
      {"None", AmbiguityKind::None}, {"Omission", AmbiguityKind::Omission}, {"Active", AmbiguityKind::Active}};
  return parse_enum(s, names, "ambiguity_kind");
}

StereotypeKind parse_stereotype(const std::string& s) {
  static const std::pair<std::string_view, StereotypeKind> names[] = {
      {"None", StereotypeKind::None}, {"Masculine", StereotypeKind::Masculine}, {"Feminine", StereotypeKind::Feminine}};
  return parse_enum(s, names, "stereotype_kind");
}

// ---- line-delimited plumbing -----------------------------------------------

template <typename F>
void for_each_line(std::string_view text, std::string_view source, F&& fn) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  if (text.substr(0, 3) == "\xEF\xBB\xBF") start = 3;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    start = end + 1;
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    try {
      fn(json::parse(line), line_no);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, std::string(source) + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ParseError) throw;
      throw Error(ErrorCode::ParseError, std::string(source) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

const json& field(const json& j, const char* key) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "record is not an object");
  auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorCode::ParseError, std::string("missing field '") + key + "'");
  return *it;
}

std::string str(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_string()) throw Error(ErrorCode::ParseError, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::uint64_t uint(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number_unsigned()) {
    throw Error(ErrorCode::ParseError, std::string("field '") + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

double num(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number()) throw Error(ErrorCode::ParseError, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

bool boolean(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_boolean()) throw Error(ErrorCode::ParseError, std::string("field '") + key + "' must be a boolean");
  return v.get<bool>();
}

std::string dump_line(const ordered_json& j) { return j.dump(-1, ' ', false, json::error_handler_t::strict) + "\n"; }

// ---- metrics ---------------------------------------------------------------

json breakdown_json(const StrategyBreakdown& b) {
  json j;
  j["count"] = b.count;
  j["u_count"] = b.u_count;
  j["u"] = b.u;
  if (b.empty()) {
    j["empty"] = true;
    return j;
  }
  j["m"] = b.m;
  j["f"] = b.f;
  j["n"] = b.n;
  if (b.strategies) {
    for (std::size_t i = 0; i < 5; ++i) j["n" + std::to_string(i + 1)] = (*b.strategies)[i];
  }
  return j;
}

StrategyBreakdown breakdown_from(const json& j) {
  StrategyBreakdown b;
  b.count = uint(j, "count");
  b.u_count = uint(j, "u_count");
  b.u = num(j, "u");
  if (j.contains("empty") && boolean(j, "empty")) return b;
  b.m = num(j, "m");
  b.f = num(j, "f");
  b.n = num(j, "n");
  if (j.contains("n1")) {
    std::array<double, 5> s{};
    for (std::size_t i = 0; i < 5; ++i) s[i] = num(j, ("n" + std::to_string(i + 1)).c_str());
    b.strategies = s;
  }
  return b;
}

json response_json(const ResponseReport& r) {
  json j;
  j["det"] = breakdown_json(r.det);
  j["amb"] = breakdown_json(r.amb);
  j["delta_m"] = r.delta_m;
  j["delta_f"] = r.delta_f;
  j["delta_n"] = r.delta_n;
  if (r.delta_ni) j["delta_ni"] = *r.delta_ni;
  j["significant_m"] = r.significant_m;
  j["significant_n"] = r.significant_n;
  return j;
}

ResponseReport response_from(const json& j) {
  ResponseReport r;
  r.det = breakdown_from(field(j, "det"));
  r.amb = breakdown_from(field(j, "amb"));
  r.delta_m = num(j, "delta_m");
  r.delta_f = num(j, "delta_f");
  r.delta_n = num(j, "delta_n");
  if (j.contains("delta_ni")) {
    const auto& d = j["delta_ni"];
    if (!d.is_array() || d.size() != 5) throw Error(ErrorCode::ParseError, "delta_ni must hold 5 numbers");
    std::array<double, 5> a{};
    for (std::size_t i = 0; i < 5; ++i) a[i] = d[i].get<double>();
    r.delta_ni = a;
  }
  r.significant_m = boolean(j, "significant_m");
  r.significant_n = boolean(j, "significant_n");
  return r;
}

json coverage_entry_json(const CoverageEntry& e) {
  return json{{"classified", e.classified}, {"unmatched", e.unmatched}, {"u", e.u}};
}

CoverageEntry coverage_entry_from(const json& j) { return {uint(j, "classified"), uint(j, "unmatched"), num(j, "u")}; }

json metrics_json(const MetricsDocument& d) {
  json j;
  j["system"] = d.system;
  j["language"] = d.language;
  j["threshold"] = d.threshold;
  if (d.baseline) {
    j["baseline"] = json{{"n_det", d.baseline->n}, {"count", d.baseline->count}};
    j["strategy_breakdown"] = breakdown_json(*d.baseline);
  } else {
    j["baseline"] = nullptr;
    j["strategy_breakdown"] = nullptr;
  }
  if (d.omission_response) {
    json o;
    o["groups"] = d.omission_response->groups;
    o["macro"] = response_json(d.omission_response->report);
    json per = json::object();
    for (const auto& [name, r] : d.omission_response->per_group) per[name] = response_json(r);
    o["per_group"] = per;
    j["omission_response"] = o;
  } else {
    j["omission_response"] = nullptr;
  }
  j["active_response"] = d.active_response ? response_json(*d.active_response) : json(nullptr);
  if (d.stereotype) {
    j["stereotype"] = json{{"neutral", breakdown_json(d.stereotype->neutral)},
                           {"stereo_m", breakdown_json(d.stereotype->stereo_m)},
                           {"stereo_f", breakdown_json(d.stereotype->stereo_f)},
                           {"delta_g_avg", d.stereotype->delta_g_avg},
                           {"delta_n_avg", d.stereotype->delta_n_avg}};
  } else {
    j["stereotype"] = nullptr;
  }
  json cov;
  cov["total"] = coverage_entry_json(d.coverage.total);
  json by = json::object();
  for (const auto& [k, e] : d.coverage.by_condition) by[k] = coverage_entry_json(e);
  cov["by_condition"] = by;
  cov["orphan_translations"] = d.coverage.orphan_translations;
  cov["untranslated_instances"] = d.coverage.untranslated_instances;
  j["coverage"] = cov;
  return j;
}

MetricsDocument metrics_from(const json& j) {
  MetricsDocument d;
  d.system = str(j, "system");
  d.language = str(j, "language");
  d.threshold = num(j, "threshold");
  if (const auto& sb = field(j, "strategy_breakdown"); !sb.is_null()) d.baseline = breakdown_from(sb);
  if (const auto& o = field(j, "omission_response"); !o.is_null()) {
    GroupedResponse g;
    g.groups = field(o, "groups").get<std::vector<std::string>>();
    g.report = response_from(field(o, "macro"));
    for (const auto& [name, r] : field(o, "per_group").items()) g.per_group.emplace(name, response_from(r));
    d.omission_response = std::move(g);
  }
  if (const auto& a = field(j, "active_response"); !a.is_null()) d.active_response = response_from(a);
  if (const auto& s = field(j, "stereotype"); !s.is_null()) {
    StereotypeReport r;
    r.neutral = breakdown_from(field(s, "neutral"));
    r.stereo_m = breakdown_from(field(s, "stereo_m"));
    r.stereo_f = breakdown_from(field(s, "stereo_f"));
    r.delta_g_avg = num(s, "delta_g_avg");
    r.delta_n_avg = num(s, "delta_n_avg");
    d.stereotype = std::move(r);
  }
  const auto& cov = field(j, "coverage");
  d.coverage.total = coverage_entry_from(field(cov, "total"));
  for (const auto& [k, e] : field(cov, "by_condition").items()) d.coverage.by_condition.emplace(k, coverage_entry_from(e));
  d.coverage.orphan_translations = uint(cov, "orphan_translations");
  d.coverage.untranslated_instances = uint(cov, "untranslated_instances");
  return d;
}

json parse_document(std::string_view text, ErrorCode code, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(code, std::string(what) + ": " + e.what());
  }
}

}  // namespace

// ---- suites ------------------------------------------------------------------

std::string write_suite(std::span<const TestInstance> suite) {
  std::string out;
  for (const auto& inst : suite) {
    ordered_json j;
    j["id"] = inst.id;
    j["family"] = family_tag(inst.family);
    j["source_text"] = inst.source_text;
    ordered_json slots = ordered_json::array();
    for (const auto& s : inst.slots) {
      ordered_json sj;
      sj["slot_index"] = s.slot_index;
      sj["lemma"] = s.english_lemma;
      sj["referent"] = referent_name(s.referent);
      sj["gender_kind"] = gender_kind_name(s.gender.kind);
      sj["ambiguity_kind"] = ambiguity_name(s.gender.ambiguity);
      sj["stereotype_kind"] = stereotype_name(s.stereotype.kind);
      sj["stereotype_cue"] = s.stereotype.cue;
      slots.push_back(std::move(sj));
    }
    j["slots"] = std::move(slots);
    j["pair_id"] = inst.pair_id ? ordered_json(*inst.pair_id) : ordered_json(nullptr);
    ordered_json b = ordered_json::object();
    for (const auto& [k, v] : inst.bindings) b[k] = v;
    j["bindings"] = std::move(b);
    out += dump_line(j);
  }
  return out;
}

std::vector<TestInstance> parse_suite(std::string_view text, std::string_view source) {
  std::vector<TestInstance> out;
  for_each_line(text, source, [&](const json& j, std::size_t) {
    TestInstance inst;
    inst.id = str(j, "id");
    try {
      inst.family = parse_family(str(j, "family"));
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, e.what());
    }
    inst.source_text = str(j, "source_text");
    const auto& slots = field(j, "slots");
    if (!slots.is_array()) throw Error(ErrorCode::ParseError, "field 'slots' must be an array");
    for (const auto& sj : slots) {
      AdjectiveSlot s;
      s.slot_index = uint(sj, "slot_index");
      s.english_lemma = str(sj, "lemma");
      s.referent = parse_referent(str(sj, "referent"));
      s.gender.kind = parse_gender_kind(str(sj, "gender_kind"));
      s.gender.ambiguity = parse_ambiguity(str(sj, "ambiguity_kind"));
      s.stereotype.kind = parse_stereotype(str(sj, "stereotype_kind"));
      s.stereotype.cue = str(sj, "stereotype_cue");
      inst.slots.push_back(std::move(s));
    }
    const auto& pair = field(j, "pair_id");
    if (!pair.is_null()) {
      if (!pair.is_string()) throw Error(ErrorCode::ParseError, "field 'pair_id' must be a string or null");
      inst.pair_id = pair.get<std::string>();
    }
    const auto& b = field(j, "bindings");
    if (!b.is_object()) throw Error(ErrorCode::ParseError, "field 'bindings' must be an object");
    for (const auto& [k, v] : b.items()) {
      if (!v.is_string()) throw Error(ErrorCode::ParseError, "binding '" + k + "' must be a string");
      inst.bindings.emplace(k, v.get<std::string>());
    }
    out.push_back(std::move(inst));
  });
  return out;
}

// ---- scores ------------------------------------------------------------------

std::string write_scores(std::span<const SlotScore> scores) {
  std::string out;
  for (const auto& s : scores) {
    ordered_json j;
    j["instance_id"] = s.instance_id;
    j["slot_index"] = s.slot_index;
    j["label"] = to_string(s.label);
    j["matched_text"] = s.matched_text;
    j["rule"] = s.rule;
    out += dump_line(j);
  }
  return out;
}

std::vector<SlotScore> parse_scores(std::string_view text, std::string_view source) {
  std::vector<SlotScore> out;
  for_each_line(text, source, [&](const json& j, std::size_t) {
    SlotScore s;
    s.instance_id = str(j, "instance_id");
    s.slot_index = uint(j, "slot_index");
    s.label = parse_label(str(j, "label"));
    s.matched_text = str(j, "matched_text");
    s.rule = str(j, "rule");
    if ((s.label == GenderLabel::Unmatched) != s.matched_text.empty()) {
      throw Error(ErrorCode::ParseError, "matched_text must be empty exactly when the label is U");
    }
    out.push_back(std::move(s));
  });
  return out;
}

// ---- translations ------------------------------------------------------------

std::string write_translations(std::span<const TranslationRecord> records) {
  std::string out;
  for (const auto& r : records) {
    ordered_json j;
    j["system"] = r.system_id;
    j["lang"] = to_string(r.language);
    j["id"] = r.instance_id;
    j["text"] = r.target_text;
    out += dump_line(j);
  }
  return out;
}

TranslationSet parse_translations(std::string_view text, const SuiteIndex* suite, std::string_view source) {
  TranslationSet set;
  std::map<std::tuple<std::string, Language, std::string>, std::size_t> seen;
  for_each_line(text, source, [&](const json& j, std::size_t line) {
    TranslationRecord r;
    r.system_id = str(j, "system");
    try {
      r.language = parse_language(str(j, "lang"));
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, e.what());
    }
    r.instance_id = str(j, "id");
    r.target_text = str(j, "text");
    auto [it, inserted] = seen.emplace(std::make_tuple(r.system_id, r.language, r.instance_id), line);
    if (!inserted) {
      throw Error(ErrorCode::DuplicateRecord, std::string(source) + ": (" + r.system_id + ", " +
                                                  std::string(to_string(r.language)) + ", " + r.instance_id +
                                                  ") appears on lines " + std::to_string(it->second) + " and " +
                                                  std::to_string(line));
    }
    if (suite && !suite->find(r.instance_id)) {
      set.orphans.push_back(std::move(r));
    } else {
      set.records.push_back(std::move(r));
    }
  });
  return set;
}

// ---- manifest ----------------------------------------------------------------

std::string write_manifest(const SuiteManifest& m) {
  ordered_json j;
  j["adjectives"] = m.adjectives;
  ordered_json pairs = ordered_json::array();
  for (const auto& p : m.descriptor_pairs) {
    pairs.push_back({{"feminine", {{"adjective", p.feminine.adjective}, {"occupation", p.feminine.occupation}}},
                     {"masculine", {{"adjective", p.masculine.adjective}, {"occupation", p.masculine.occupation}}}});
  }
  j["descriptor_pairs"] = std::move(pairs);
  j["adverbs"] = {{"masculine", m.masculine_adverbs}, {"feminine", m.feminine_adverbs}};
  ordered_json q = ordered_json::object();
  for (const auto& [k, v] : m.quotas) q[to_string(k)] = v;
  j["quotas"] = std::move(q);
  j["seed"] = m.seed;
  return j.dump(2) + "\n";
}

SuiteManifest parse_manifest(std::string_view text) {
  json j = parse_document(text, ErrorCode::InvalidManifest, "manifest");
  SuiteManifest m;
  try {
    auto strings = [](const json& v, const char* what) {
      if (!v.is_array()) throw Error(ErrorCode::InvalidManifest, std::string(what) + " must be an array of strings");
      std::vector<std::string> out;
      for (const auto& s : v) {
        if (!s.is_string()) throw Error(ErrorCode::InvalidManifest, std::string(what) + " must hold strings");
        out.push_back(s.get<std::string>());
      }
      return out;
    };
    if (!j.is_object()) throw Error(ErrorCode::InvalidManifest, "manifest must be an object");
    if (j.contains("adjectives")) m.adjectives = strings(j["adjectives"], "adjectives");
    if (j.contains("descriptor_pairs")) {
      for (const auto& p : j["descriptor_pairs"]) {
        auto desc = [&](const char* side) {
          const auto& d = p.at(side);
          return Descriptor{d.at("adjective").get<std::string>(), d.at("occupation").get<std::string>()};
        };
        m.descriptor_pairs.push_back({desc("feminine"), desc("masculine")});
      }
    }
    if (j.contains("adverbs")) {
      const auto& a = j["adverbs"];
      if (a.contains("masculine")) m.masculine_adverbs = strings(a["masculine"], "adverbs.masculine");
      if (a.contains("feminine")) m.feminine_adverbs = strings(a["feminine"], "adverbs.feminine");
    }
    if (!j.contains("quotas") || !j["quotas"].is_object()) {
      throw Error(ErrorCode::InvalidManifest, "manifest needs a 'quotas' object");
    }
    for (const auto& [k, v] : j["quotas"].items()) {
      if (!v.is_number_unsigned()) throw Error(ErrorCode::InvalidManifest, "quota " + k + " must be a non-negative integer");
      m.quotas[parse_quota_key(k)] = v.get<std::uint64_t>();
    }
    if (j.contains("seed")) {
      if (!j["seed"].is_number_unsigned()) throw Error(ErrorCode::InvalidManifest, "seed must be a non-negative integer");
      m.seed = j["seed"].get<std::uint64_t>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidManifest, std::string("manifest: ") + e.what());
  }
  return m;
}

// ---- metrics -----------------------------------------------------------------

std::string write_metrics(const MetricsDocument& doc) { return metrics_json(doc).dump(2) + "\n"; }

MetricsDocument parse_metrics(std::string_view text) {
  json j = parse_document(text, ErrorCode::ParseError, "metrics");
  try {
    return metrics_from(j);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("metrics: ") + e.what());
  }
}

std::vector<MetricsDocument> parse_metrics_set(std::string_view text) {
  json j = parse_document(text, ErrorCode::ParseError, "metrics");
  std::vector<MetricsDocument> out;
  try {
    if (j.is_array()) {
      for (const auto& d : j) out.push_back(metrics_from(d));
    } else {
      out.push_back(metrics_from(j));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("metrics: ") + e.what());
  }
  return out;
}

std::string write_metrics_set(std::span<const MetricsDocument> docs) {
  if (docs.size() == 1) return write_metrics(docs[0]);
  json arr = json::array();
  for (const auto& d : docs) arr.push_back(metrics_json(d));
  return arr.dump(2) + "\n";
}

// ---- files -------------------------------------------------------------------

std::string read_text_file(const std::filesystem::path& path) { return csv::read_file(path); }

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::IoError, "write to '" + tmp.string() + "' failed");
  }
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot rename '" + tmp.string() + "': " + ec.message());
}

}  // namespace gnt
