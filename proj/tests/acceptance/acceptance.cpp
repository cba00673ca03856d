// Acceptance suite: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "generators.hpp"
#include "gnt/classify.hpp"
#include "gnt/error.hpp"
#include "gnt/io.hpp"
#include "gnt/metrics.hpp"
#include "gnt/pipeline.hpp"
#include "gnt/suite.hpp"
#include "oracle.hpp"

using namespace gnt;
namespace fs = std::filesystem;

namespace {

// tolerances
constexpr double kReplayTol = 0.01;
constexpr double kExactTol = 1e-12;
constexpr double kGenerateSeconds = 5.0;
constexpr int kBalanceManifests = 1000;
constexpr int kOracleCases = 10000;
constexpr int kPropertyCases = 2000;

const fs::path kData = GNT_TEST_DATA_DIR;
const fs::path kFixtures = GNT_FIXTURES_DIR;
const fs::path kLexDir = kData / "demo" / "lexicon";

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && out_.pass) {
      out_.pass = false;
      out_.detail = what;
    }
  }
  void near(double got, double want, double tol, const std::string& what) {
    if (!(std::fabs(got - want) <= tol)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s: got %.6f, want %.6f +- %g", what.c_str(), got, want, tol);
      expect(false, buf);
    }
  }
  void note(const std::string& s) {
    if (out_.pass) out_.detail = s;
  }
  Outcome result() const { return out_; }

 private:
  Outcome out_;
};

const Lexicon& demo_lexicon(Language lang) {
  static const Lexicon is = load_lexicon(Language::IS, kLexDir);
  static const Lexicon cs = load_lexicon(Language::CS, kLexDir);
  static const Lexicon es = load_lexicon(Language::ES, kLexDir);
  return lang == Language::IS ? is : lang == Language::CS ? cs : es;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

// ---- 1 ---------------------------------------------------------------------

Outcome suite_counts() {
  Check c;
  auto manifest = parse_manifest(read_text_file(kData / "demo" / "manifest_full_scale.json"));
  auto start = std::chrono::steady_clock::now();
  auto suite = generate_suite(manifest);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::vector<std::pair<std::string, std::uint64_t>> want = {
      {"T1-Det", 2400}, {"T2-Det", 3840}, {"T3-Det", 1200}, {"T3-Amb", 1200},
      {"T4-Det", 1920}, {"T4-Amb", 1920}, {"T5-Det", 352},  {"T5-Amb", 176},
      {"T7-None", 130}, {"T7-StereoM", 390}, {"T7-StereoF", 390},
  };
  std::map<std::string, std::uint64_t> got;
  std::size_t total = 0;
  for (const auto& inst : suite.instances) {
    for (const auto& s : inst.slots) {
      ++got[to_string(quota_key_of(inst.family, s))];
      ++total;
    }
  }
  c.expect(total == 13918, "total slots " + std::to_string(total));
  for (const auto& [key, n] : want) c.expect(got[key] == n, key + " has " + std::to_string(got[key]));
  c.expect(got.size() == want.size(), "unexpected quota keys");
  c.expect(secs < kGenerateSeconds, "generation took " + std::to_string(secs) + " s");
  c.note(std::to_string(total) + " slots in " + fmt(secs) + " s");
  return c.result();
}

// ---- 2 ---------------------------------------------------------------------

// Counts taken straight from the instances, not from the diagnostics.
Outcome balance() {
  Check c;
  std::mt19937_64 rng(20241);
  int generated = 0, infeasible = 0, attempts = 0;
  while (generated < kBalanceManifests && attempts < 20 * kBalanceManifests) {
    ++attempts;
    auto m = gnt::testing::random_manifest(rng);
    GeneratedSuite suite;
    try {
      suite = generate_suite(m);
    } catch (const Error& e) {
      c.expect(e.code() == ErrorCode::QuotaInfeasible, std::string("unexpected error ") + e.what());
      ++infeasible;
      continue;
    }
    ++generated;
    auto diag = validate_balance(suite.instances, m.quotas);
    if (!diag.ok()) {
      c.expect(false, "manifest " + std::to_string(attempts) + ": " + diag.violations[0].detail);
      continue;
    }
    // a quota that is not a whole number of cycles may be off by one
    std::int64_t slack = suite.warnings.empty() ? 0 : 1;

    std::map<TemplateFamily, std::int64_t> masc, fem;
    std::map<TemplateFamily, std::int64_t> first, second;
    std::map<std::string, std::int64_t> pronouns;
    for (const auto& inst : suite.instances) {
      for (const auto& s : inst.slots) {
        if (s.gender.kind == GenderKind::DeterminedMasculine) ++masc[inst.family];
        if (s.gender.kind == GenderKind::DeterminedFeminine) ++fem[inst.family];
      }
      if (inst.family == TemplateFamily::T3_OnePersonPartial || inst.family == TemplateFamily::T4_TwoPersonPartial) {
        auto it = inst.bindings.find(binding::kNarrator);
        if (it != inst.bindings.end()) (it->second == "first" ? first : second)[inst.family] += 1;
      }
      if (inst.family == TemplateFamily::T5_CharStereotype) {
        auto it = inst.bindings.find(binding::kPronoun);
        if (it != inst.bindings.end()) ++pronouns[it->second];
      }
    }
    for (auto f : kAllFamilies) {
      c.expect(std::llabs(masc[f] - fem[f]) <= slack,
               std::string(family_tag(f)) + " gender " + std::to_string(masc[f]) + ":" + std::to_string(fem[f]));
    }
    for (auto f : {TemplateFamily::T3_OnePersonPartial, TemplateFamily::T4_TwoPersonPartial}) {
      c.expect(std::llabs(first[f] - second[f]) <= slack,
               std::string(family_tag(f)) + " narrator " + std::to_string(first[f]) + ":" + std::to_string(second[f]));
    }
    std::int64_t he = pronouns["he"], she = pronouns["she"], they = pronouns["they"];
    c.expect(std::max({he, she, they}) - std::min({he, she, they}) <= slack,
             "pronouns " + std::to_string(he) + ":" + std::to_string(she) + ":" + std::to_string(they));
    if (!c.result().pass) break;
  }
  c.expect(generated == kBalanceManifests, "only " + std::to_string(generated) + " feasible manifests");
  c.note(std::to_string(generated) + " manifests balanced (" + std::to_string(infeasible) +
         " infeasible tails rejected)");
  return c.result();
}

// ---- 3 ---------------------------------------------------------------------

Outcome golden_set() {
  Check c;
  struct Cell {
    Language lang;
    std::string lemma, text;
    GenderLabel label;
  };
  const std::vector<Cell> cells = {
      {Language::ES, "fit", "fuerte", GenderLabel::N1_CommonForm},
      {Language::ES, "fit", "en forma", GenderLabel::N3_AltPartOfSpeech},
      {Language::ES, "fit", "fit", GenderLabel::N4_SourceCopy},
      {Language::ES, "fit", "musculos(o/a)", GenderLabel::N5_AltMorphology},
      {Language::CS, "nonsensical", "absurdní", GenderLabel::N1_CommonForm},
      {Language::CS, "nonsensical", "nesmyslné", GenderLabel::N2_NeuterCase},
      {Language::CS, "nonsensical", "nemám smysl", GenderLabel::N3_AltPartOfSpeech},
      {Language::CS, "nonsensical", "nonsensical", GenderLabel::N4_SourceCopy},
      {Language::CS, "nonsensical", "nesmysln(ý/á)", GenderLabel::N5_AltMorphology},
      {Language::IS, "cautious", "varkár", GenderLabel::N1_CommonForm},
      {Language::IS, "cautious", "varkárt", GenderLabel::N2_NeuterCase},
      {Language::IS, "cautious", "á varðbergi", GenderLabel::N3_AltPartOfSpeech},
      {Language::IS, "cautious", "cautious", GenderLabel::N4_SourceCopy},
      {Language::IS, "cautious", "huglítil(l)", GenderLabel::N5_AltMorphology},
  };
  for (const auto& cell : cells) {
    AdjectiveSlot slot;
    slot.english_lemma = cell.lemma;
    std::set<std::size_t> consumed;
    auto got = classify_slot(slot, normalize(cell.text), demo_lexicon(cell.lang), consumed, "golden");
    c.expect(got.label == cell.label, cell.text + " -> " + std::string(to_string(got.label)) + ", want " +
                                          std::string(to_string(cell.label)));
  }
  c.note(std::to_string(cells.size()) + " cells exact");
  return c.result();
}

// ---- 4 ---------------------------------------------------------------------

Outcome oracle_equivalence() {
  Check c;
  std::mt19937_64 rng(4242);
  int agree = 0;
  for (int i = 0; i < kOracleCases; ++i) {
    auto rc = gnt::testing::random_classifier_case(rng);
    Lexicon lex(Language::CS, rc.entries, rc.phrases, rc.patterns);
    TestInstance inst;
    inst.id = "case" + std::to_string(i);
    for (std::size_t k = 0; k < rc.lemmas.size(); ++k) {
      AdjectiveSlot s;
      s.slot_index = k;
      s.english_lemma = rc.lemmas[k];
      inst.slots.push_back(s);
    }
    auto got = classify_instance(inst, rc.translation, lex);
    auto want = gnt::testing::oracle_instance(rc.lemmas, rc.translation, rc.entries, rc.phrases, rc.patterns);
    bool same = got.size() == want.size();
    for (std::size_t k = 0; same && k < got.size(); ++k) {
      same = got[k].label == want[k].label && got[k].matched_text == want[k].matched_text;
    }
    c.expect(same, "case " + std::to_string(i) + " disagrees: " + rc.translation);
    agree += same;
  }
  c.note(std::to_string(agree) + "/" + std::to_string(kOracleCases) + " agree");
  return c.result();
}

// ---- 5 ---------------------------------------------------------------------

Outcome response_replay() {
  Check c;
  struct Row {
    std::string name;
    double det[3], amb[3];
    double dm, df, dn;
  };
  const std::vector<Row> rows = {
      {"Claude-3.5 IS", {0.42, 0.36, 0.22}, {0.51, 0.09, 0.40}, 0.087, -0.267, 0.180},
      {"CUNI-GA CS", {0.40, 0.40, 0.20}, {0.53, 0.19, 0.28}, 0.128, -0.209, 0.081},
      {"GPT-4 ES", {0.44, 0.18, 0.38}, {0.56, 0.05, 0.39}, 0.120, -0.13, 0.010},
  };
  for (const auto& r : rows) {
    auto rep = paired_response(StrategyBreakdown::from_triplet(r.det[0], r.det[1], r.det[2]),
                               StrategyBreakdown::from_triplet(r.amb[0], r.amb[1], r.amb[2]), kDefaultThreshold);
    c.near(rep.delta_m, r.dm, kReplayTol, r.name + " dM");
    c.near(rep.delta_f, r.df, kReplayTol, r.name + " dF");
    c.near(rep.delta_n, r.dn, kReplayTol, r.name + " dN");
  }
  c.note("3 rows within 0.01");
  return c.result();
}

// ---- 6 ---------------------------------------------------------------------

std::array<std::uint64_t, 8> random_counts(std::mt19937_64& rng) {
  std::array<std::uint64_t, 8> counts{};
  do {
    for (auto& n : counts) n = gnt::testing::uniform(rng, 0, 3) == 0 ? 0 : gnt::testing::uniform(rng, 0, 500);
  } while (std::accumulate(counts.begin(), counts.begin() + 7, std::uint64_t{0}) == 0);
  return counts;
}

Outcome additivity() {
  Check c;
  // reference per-strategy deltas, rounded
  const std::array<double, 5> dni = {-0.015, -0.012, -0.009, 0.000, 0.215};
  double sum = 0;
  for (double d : dni) sum += d;
  c.near(sum, 0.180, kReplayTol, "reference dN_i sum");

  std::mt19937_64 rng(66);
  double worst = 0;
  for (int i = 0; i < kPropertyCases; ++i) {
    auto rep = paired_response(StrategyBreakdown::from_counts(random_counts(rng)),
                               StrategyBreakdown::from_counts(random_counts(rng)), kDefaultThreshold);
    if (!rep.delta_ni) {
      c.expect(false, "delta_ni missing");
      break;
    }
    double s = 0;
    for (double d : *rep.delta_ni) s += d;
    worst = std::max(worst, std::fabs(s - rep.delta_n));
  }
  c.expect(worst <= kExactTol, "additivity error " + std::to_string(worst));
  char buf[96];
  std::snprintf(buf, sizeof buf, "reference sum %.3f; synthetic max error %.1e", sum, worst);
  c.note(buf);
  return c.result();
}

// ---- 7 ---------------------------------------------------------------------

Outcome stereotype_replay() {
  Check c;
  struct Row {
    std::string name;
    double neu[3], sm[3], sf[3];
    double dg, dn;
  };
  const std::vector<Row> rows = {
      {"GPT-4 IS", {0.29, 0.48, 0.23}, {0.47, 0.32, 0.21}, {0.24, 0.54, 0.22}, 0.119, -0.014},
      {"Claude-3.5 CS", {0.64, 0.18, 0.17}, {0.78, 0.06, 0.16}, {0.48, 0.35, 0.17}, 0.147, -0.005},
      {"ONLINE-W ES", {0.48, 0.16, 0.36}, {0.51, 0.12, 0.36}, {0.28, 0.36, 0.36}, 0.116, 0.001},
  };
  std::string got;
  for (const auto& r : rows) {
    auto t = [](const double* v) { return StrategyBreakdown::from_triplet(v[0], v[1], v[2]); };
    auto rep = compute_stereotype_effect(t(r.neu), t(r.sm), t(r.sf));
    c.near(rep.delta_g_avg, r.dg, kReplayTol, r.name + " dG");
    c.near(rep.delta_n_avg, r.dn, kReplayTol, r.name + " dN");
    got += (got.empty() ? "" : ", ") + fmt(rep.delta_g_avg) + "/" + fmt(rep.delta_n_avg);
  }
  c.note("dG/dN " + got);
  return c.result();
}

// ---- 8 ---------------------------------------------------------------------

Outcome closure() {
  Check c;
  std::mt19937_64 rng(88);
  double worst = 0;
  auto check = [&](const ResponseReport& r) {
    for (const auto* b : {&r.det, &r.amb}) {
      if (!b->empty()) worst = std::max(worst, std::fabs(b->m + b->f + b->n - 1.0));
    }
    worst = std::max(worst, std::fabs(r.delta_m + r.delta_f + r.delta_n));
  };
  for (int i = 0; i < kPropertyCases; ++i) {
    std::vector<std::pair<std::string, ResponseReport>> parts;
    std::size_t k = gnt::testing::uniform(rng, 1, 4);
    for (std::size_t j = 0; j < k; ++j) {
      auto r = paired_response(StrategyBreakdown::from_counts(random_counts(rng)),
                               StrategyBreakdown::from_counts(random_counts(rng)), kDefaultThreshold);
      check(r);
      parts.emplace_back("g" + std::to_string(j), r);
    }
    check(macro_average(parts, kDefaultThreshold));
  }
  c.expect(worst <= kExactTol, "closure error " + std::to_string(worst));
  char buf[64];
  std::snprintf(buf, sizeof buf, "max error %.1e", worst);
  c.note(buf);
  return c.result();
}

// ---- 9 ---------------------------------------------------------------------

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char ch : s) out += ch == '\'' ? std::string("'\\''") : std::string(1, ch);
  return out + "'";
}

int run(const std::string& cmd) { return std::system(cmd.c_str()); }

std::string form_of(const Lexicon& lex, const std::string& lemma, FormGender g) {
  const auto* forms = lex.forms(lemma);
  if (forms) {
    for (const auto& [folded, form] : *forms) {
      if (form.gender == g) return form.surface;
    }
  }
  throw Error(ErrorCode::InvalidEntry, "demo lexicon has no " + std::string(to_string(g)) + " form for " + lemma);
}

// Scripted translations: determined slots agree with their gender, omission
// slots always take the masculine form, and "they" alternates between a
// source copy and the masculine form, sorted by id.
std::string engineered_key(const std::vector<TestInstance>& suite, const Lexicon& lex) {
  std::vector<const TestInstance*> order;
  for (const auto& inst : suite) order.push_back(&inst);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->id < b->id; });
  std::string key;
  std::size_t they = 0;
  for (const auto* inst : order) {
    std::string text;
    for (const auto& s : inst->slots) {
      std::string word;
      if (s.gender.kind == GenderKind::DeterminedMasculine) {
        word = form_of(lex, s.english_lemma, FormGender::MasculineOnly);
      } else if (s.gender.kind == GenderKind::DeterminedFeminine) {
        word = form_of(lex, s.english_lemma, FormGender::FeminineOnly);
      } else if (s.gender.ambiguity == AmbiguityKind::Active) {
        word = they++ % 2 == 0 ? s.english_lemma : form_of(lex, s.english_lemma, FormGender::MasculineOnly);
      } else {
        word = form_of(lex, s.english_lemma, FormGender::MasculineOnly);
      }
      text += (text.empty() ? "" : " ; ") + word;
    }
    key += inst->id + "\t" + text + "\n";
  }
  return key;
}

Outcome end_to_end(const fs::path& work) {
  Check c;
  const std::string gnt = shell_quote(GNT_CLI);
  const fs::path manifest = kData / "demo" / "manifest_demo.json";
  const fs::path suite_path = work / "suite.jsonl";

  c.expect(run(gnt + " generate --manifest " + shell_quote(manifest) + " --out " + shell_quote(suite_path)) == 0,
           "gnt generate failed");
  if (!c.result().pass) return c.result();
  auto suite = parse_suite(read_text_file(suite_path));
  c.expect(count_slots(suite) >= 200, "demo suite has fewer than 200 slots");

  write_text_file(work / "key.tsv", engineered_key(suite, demo_lexicon(Language::ES)));
  std::string fake_adapter = "cmd:" + shell_quote(GNT_FAKE_MT) + " " + shell_quote((work / "key.tsv").string());
  c.expect(run(gnt + " translate --suite " + shell_quote(suite_path) + " --adapter " + shell_quote(fake_adapter) +
               " --lang es --system fake --batch-size 50 --out " + shell_quote(work / "fake.jsonl")) == 0,
           "gnt translate (fake) failed");
  c.expect(run(gnt + " translate --suite " + shell_quote(suite_path) + " --adapter cmd:cat" +
               " --lang es --system echo --out " + shell_quote(work / "echo.jsonl")) == 0,
           "gnt translate (echo) failed");
  c.expect(run(gnt + " run --manifest " + shell_quote(manifest) + " --translations " +
               shell_quote(work / "fake.jsonl") + " --translations " + shell_quote(work / "echo.jsonl") +
               " --lexicon-dir " + shell_quote(kLexDir) + " --out-dir " + shell_quote(work / "out")) == 0,
           "gnt run failed");
  if (!c.result().pass) return c.result();

  auto fake = parse_metrics(read_text_file(work / "out" / "metrics_fake_es.json"));
  c.expect(fake.active_response.has_value(), "no active response");
  if (fake.active_response) {
    c.expect(fake.active_response->delta_n == 0.5,
             "engineered dN is " + std::to_string(fake.active_response->delta_n));
  }
  auto report = read_text_file(work / "out" / "report.md");
  auto golden = read_text_file(kFixtures / "e2e_report.md");
  c.expect(report == golden, "report.md differs from the golden file (kept in " + work.string() + ")");
  c.note("active dN = 0.500 exactly; report matches golden file");
  return c.result();
}

// ---- 10 --------------------------------------------------------------------

Outcome round_trip(const fs::path& work) {
  Check c;
  auto same = [&](const std::string& what, const std::string& text, auto parse, auto write) {
    c.expect(!text.empty(), what + " is empty");
    c.expect(write(parse(text)) == text, what + " changed on round trip");
  };
  auto suite_rt = [](const std::string& t) { return write_suite(parse_suite(t)); };
  auto id = [](const std::string& t) { return t; };

  auto full = generate_suite(parse_manifest(read_text_file(kData / "demo" / "manifest_full_scale.json")));
  same("full-scale suite", write_suite(full.instances), id, suite_rt);

  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(work / "out")) {
    auto name = entry.path().filename().string();
    auto text = read_text_file(entry.path());
    if (name == "suite.jsonl") {
      same(name, text, id, suite_rt);
    } else if (name.rfind("scores_", 0) == 0) {
      same(name, text, id, [](const std::string& t) { return write_scores(parse_scores(t)); });
    } else if (name.rfind("metrics_", 0) == 0) {
      same(name, text, id, [](const std::string& t) { return write_metrics(parse_metrics(t)); });
    } else {
      continue;
    }
    ++files;
  }
  c.expect(files == 5, "expected 5 fixture files, found " + std::to_string(files));
  c.note(std::to_string(files + 1) + " files byte-identical");
  return c.result();
}

}  // namespace

int main() {
  fs::path work = fs::temp_directory_path() / ("gnt_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(work);
  fs::create_directories(work);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"suite counts", suite_counts},
      {"balance properties", balance},
      {"classifier golden set", golden_set},
      {"classifier oracle equivalence", oracle_equivalence},
      {"response replay", response_replay},
      {"strategy additivity", additivity},
      {"stereotype replay", stereotype_replay},
      {"closure", closure},
      {"end-to-end fixture", [&] { return end_to_end(work); }},
      {"round trip", [&] { return round_trip(work); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  if (failed == 0) fs::remove_all(work);
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
