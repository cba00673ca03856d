#include "gnt/suite.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <limits>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>
#include <unordered_map>

#include "gnt/error.hpp"

namespace gnt {

namespace {

constexpr std::string_view kTags[] = {"T1", "T2", "T3", "T4", "T5", "T7"};

const std::string& require(const Bindings& b, const std::string& key) {
  auto it = b.find(key);
  if (it == b.end() || it->second.empty()) {
    throw Error(ErrorCode::MissingBinding, "template variable '" + key + "' is not bound");
  }
  return it->second;
}

std::string adjective(const Bindings& b, const std::string& key) {
  const std::string& value = require(b, key);
  if (value.find_first_of("{}[]\"\n\t") != std::string::npos) {
    throw Error(ErrorCode::InconsistentBinding, "adjective '" + value + "' contains template or control characters");
  }
  return value;
}

// true for feminine
bool character_gender(const Bindings& b, const std::string& key) {
  const std::string& value = require(b, key);
  if (value == "woman") return true;
  if (value == "man") return false;
  throw Error(ErrorCode::InconsistentBinding, key + " must be 'woman' or 'man', got '" + value + "'");
}

bool binary_flag(const Bindings& b, const std::string& key) {
  const std::string& value = require(b, key);
  if (value == "F") return true;
  if (value == "M") return false;
  throw Error(ErrorCode::InconsistentBinding, key + " must be 'F' or 'M', got '" + value + "'");
}

bool claim_is_self(const Bindings& b) {
  const std::string& value = require(b, binding::kFirstClaim);
  if (value == "I'm") return true;
  if (value == "you're") return false;
  throw Error(ErrorCode::InconsistentBinding, "first_claim must be \"I'm\" or \"you're\", got '" + value + "'");
}

bool yes_no(const Bindings& b, const std::string& key) {
  const std::string& value = require(b, key);
  if (value == "yes") return true;
  if (value == "no") return false;
  throw Error(ErrorCode::InconsistentBinding, key + " must be 'yes' or 'no', got '" + value + "'");
}

bool narrator_first(const Bindings& b) {
  const std::string& value = require(b, binding::kNarrator);
  if (value == "first") return true;
  if (value == "second") return false;
  throw Error(ErrorCode::InconsistentBinding, "narrator must be 'first' or 'second', got '" + value + "'");
}

std::string pronoun(bool feminine) { return feminine ? "she" : "he"; }
std::string capitalized(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

// An optional explicit pronoun must agree with the character it names.
void check_pronoun(const Bindings& b, bool feminine) {
  auto it = b.find(binding::kPronoun);
  if (it != b.end() && it->second != pronoun(feminine)) {
    throw Error(ErrorCode::InconsistentBinding,
                "pronoun '" + it->second + "' does not match a " + (feminine ? "woman" : "man"));
  }
}

GenderCondition determined(bool feminine) {
  return feminine ? GenderCondition::feminine() : GenderCondition::masculine();
}

struct SlotBuilder {
  std::vector<AdjectiveSlot> slots;
  void add(const std::string& lemma, Referent referent, GenderCondition gender, StereotypeCondition stereo = {}) {
    slots.push_back({slots.size(), lemma, referent, gender, std::move(stereo)});
  }
};

std::string reply_clause(bool self, bool bracket, const std::string& a1, const std::string& a2) {
  std::string out = "\"No, ";
  if (bracket) out += std::string(self ? "you're" : "I'm") + " not " + a1 + ", but ";
  out += std::string(self ? "you are" : "I am") + " " + a2 + ",\" ";
  return out;
}

TestInstance expand_one_person_known(const Bindings& b) {
  bool first_f = character_gender(b, binding::kFirstCharacter);
  check_pronoun(b, first_f);
  bool self = claim_is_self(b);
  bool bracket = yes_no(b, binding::kBracket);
  std::string a1 = adjective(b, "A1");
  std::string a2 = adjective(b, "A2");

  // Every adjective describes one person: the first speaker when the claim is
  // self-referential, otherwise the listener.
  GenderCondition g = determined(self ? first_f : !first_f);
  Referent reply_ref = self ? Referent::Listener : Referent::Speaker;

  TestInstance inst;
  inst.family = TemplateFamily::T1_OnePersonKnown;
  inst.source_text = "The " + require(b, binding::kFirstCharacter) + " smiled. \"I think " +
                     require(b, binding::kFirstClaim) + " " + a1 + ",\" " + pronoun(first_f) + " said. " +
                     capitalized(pronoun(!first_f)) + " laughed back. " + reply_clause(self, bracket, a1, a2) +
                     pronoun(!first_f) + " replied.";
  SlotBuilder s;
  s.add(a1, self ? Referent::Speaker : Referent::Listener, g);
  if (bracket) s.add(a1, reply_ref, g);
  s.add(a2, reply_ref, g);
  inst.slots = std::move(s.slots);
  return inst;
}

TestInstance expand_two_person_known(const Bindings& b) {
  bool first_f = character_gender(b, binding::kFirstCharacter);
  check_pronoun(b, first_f);
  std::string a[4] = {adjective(b, "A1"), adjective(b, "A2"), adjective(b, "A3"), adjective(b, "A4")};

  TestInstance inst;
  inst.family = TemplateFamily::T2_TwoPersonKnown;
  inst.source_text = "The " + require(b, binding::kFirstCharacter) + " smiled. \"I think I'm " + a[0] +
                     " and you're " + a[1] + ",\" " + pronoun(first_f) + " said. " +
                     capitalized(pronoun(!first_f)) + " laughed back. \"No, you're " + a[2] + ", but I'm " + a[3] +
                     ",\" " + pronoun(!first_f) + " replied.";
  SlotBuilder s;
  s.add(a[0], Referent::Speaker, determined(first_f));
  s.add(a[1], Referent::Listener, determined(!first_f));
  s.add(a[2], Referent::Listener, determined(first_f));
  s.add(a[3], Referent::Speaker, determined(!first_f));
  inst.slots = std::move(s.slots);
  return inst;
}

// Opening of the T3/T4 shapes: one of the two characters is the narrator "I".
struct PartialCast {
  std::string opener;     // "I" or "The woman"
  std::string first_tag;  // "I" or "she"
  std::string second_subject;  // "She" or "I"
  std::string second_tag;      // "she" or "I"
};

PartialCast partial_cast(const Bindings& b, bool& narrator_is_first, bool& other_f) {
  narrator_is_first = narrator_first(b);
  other_f = character_gender(b, binding::kOtherCharacter);
  check_pronoun(b, other_f);
  if (narrator_is_first) {
    return {"I", "I", capitalized(pronoun(other_f)), pronoun(other_f)};
  }
  return {"The " + require(b, binding::kOtherCharacter), pronoun(other_f), "I", "I"};
}

TestInstance expand_one_person_partial(const Bindings& b) {
  bool narrator_is_first = false, other_f = false;
  PartialCast cast = partial_cast(b, narrator_is_first, other_f);
  bool self = claim_is_self(b);
  bool bracket = yes_no(b, binding::kBracket);
  std::string a1 = adjective(b, "A1");
  std::string a2 = adjective(b, "A2");

  // The described person is the first character iff the claim is
  // self-referential; it is ambiguous exactly when that person is "I".
  bool about_narrator = (self == narrator_is_first);
  GenderCondition g = about_narrator ? GenderCondition::omission() : determined(other_f);
  Referent reply_ref = self ? Referent::Listener : Referent::Speaker;

  TestInstance inst;
  inst.family = TemplateFamily::T3_OnePersonPartial;
  inst.source_text = cast.opener + " smiled. \"I think " + require(b, binding::kFirstClaim) + " " + a1 + ",\" " +
                     cast.first_tag + " said. " + cast.second_subject + " laughed back. " +
                     reply_clause(self, bracket, a1, a2) + cast.second_tag + " replied.";
  SlotBuilder s;
  s.add(a1, self ? Referent::Speaker : Referent::Listener, g);
  if (bracket) s.add(a1, reply_ref, g);
  s.add(a2, reply_ref, g);
  inst.slots = std::move(s.slots);
  return inst;
}

TestInstance expand_two_person_partial(const Bindings& b) {
  bool narrator_is_first = false, other_f = false;
  PartialCast cast = partial_cast(b, narrator_is_first, other_f);
  std::string a[4] = {adjective(b, "A1"), adjective(b, "A2"), adjective(b, "A3"), adjective(b, "A4")};

  GenderCondition first = narrator_is_first ? GenderCondition::omission() : determined(other_f);
  GenderCondition second = narrator_is_first ? determined(other_f) : GenderCondition::omission();

  TestInstance inst;
  inst.family = TemplateFamily::T4_TwoPersonPartial;
  inst.source_text = cast.opener + " smiled. \"I think I'm " + a[0] + " and you're " + a[1] + ",\" " +
                     cast.first_tag + " said. " + cast.second_subject + " laughed back. \"No, you're " + a[2] +
                     ", but I'm " + a[3] + ",\" " + cast.second_tag + " replied.";
  SlotBuilder s;
  s.add(a[0], Referent::Speaker, first);
  s.add(a[1], Referent::Listener, second);
  s.add(a[2], Referent::Listener, first);
  s.add(a[3], Referent::Speaker, second);
  inst.slots = std::move(s.slots);
  return inst;
}

TestInstance expand_char_stereotype(const Bindings& b) {
  const std::string& character = require(b, binding::kCharacter);
  const std::string& opposite = require(b, binding::kOppositeCharacter);
  bool cue_f = binary_flag(b, binding::kStereotype);
  const std::string& pron = require(b, binding::kPronoun);
  std::string a = adjective(b, "A");

  GenderCondition g;
  if (pron == "he") {
    g = GenderCondition::masculine();
  } else if (pron == "she") {
    g = GenderCondition::feminine();
  } else if (pron == "they") {
    g = GenderCondition::active();
  } else {
    throw Error(ErrorCode::InconsistentBinding, "pronoun must be he, she or they, got '" + pron + "'");
  }

  TestInstance inst;
  inst.family = TemplateFamily::T5_CharStereotype;
  inst.source_text =
      "The " + character + " smiled. \"I think I'm " + a + ",\" " + pron + " said to the " + opposite + ".";
  SlotBuilder s;
  s.add(a, Referent::Speaker, g,
        {cue_f ? StereotypeKind::Feminine : StereotypeKind::Masculine, character});
  inst.slots = std::move(s.slots);
  return inst;
}

TestInstance expand_adverb_stereotype(const Bindings& b) {
  std::string a = adjective(b, "A");
  auto it = b.find(binding::kAdverb);
  std::string adverb = it == b.end() ? std::string() : it->second;

  StereotypeCondition stereo;
  if (!adverb.empty()) {
    stereo.kind = binary_flag(b, binding::kAdverbStereotype) ? StereotypeKind::Feminine : StereotypeKind::Masculine;
    stereo.cue = adverb;
  }

  TestInstance inst;
  inst.family = TemplateFamily::T7_AdverbStereotype;
  inst.source_text = "\"I think I'm " + a + ",\" I said" + (adverb.empty() ? "" : " " + adverb) + ".";
  SlotBuilder s;
  s.add(a, Referent::Speaker, GenderCondition::omission(), std::move(stereo));
  inst.slots = std::move(s.slots);
  return inst;
}

// ---- generation ------------------------------------------------------------

// A generation unit (an instance, pair or triple) as seen by the quota
// planner: how many slots it adds to the family's leading quota and how it
// moves each balance dimension.
struct UnitShape {
  std::uint64_t slots;
  std::vector<int> dims;
};

struct TailScore {
  int max_abs = 0;
  int sum_abs = 0;
  auto operator<=>(const TailScore&) const = default;
};

class TailPlanner {
 public:
  explicit TailPlanner(const std::vector<UnitShape>& units) : units_(units) {}

  // Best multiset of units summing to exactly `remaining` slots, as unit
  // indices in cycle order; nullopt when no combination fits.
  std::optional<std::pair<TailScore, std::vector<std::size_t>>> solve(std::uint64_t remaining) {
    std::vector<int> dims(units_.empty() ? 0 : units_[0].dims.size(), 0);
    return search(0, remaining, dims);
  }

 private:
  using Result = std::optional<std::pair<TailScore, std::vector<std::size_t>>>;

  Result search(std::size_t first, std::uint64_t remaining, std::vector<int>& dims) {
    if (remaining == 0) {
      TailScore score;
      for (int d : dims) {
        score.max_abs = std::max(score.max_abs, std::abs(d));
        score.sum_abs += std::abs(d);
      }
      return std::make_pair(score, std::vector<std::size_t>{});
    }
    if (first == units_.size()) return std::nullopt;

    std::string key = std::to_string(first) + ":" + std::to_string(remaining);
    for (int d : dims) key += "," + std::to_string(d);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    Result best = search(first + 1, remaining, dims);
    const UnitShape& unit = units_[first];
    if (unit.slots <= remaining) {
      for (std::size_t i = 0; i < dims.size(); ++i) dims[i] += unit.dims[i];
      Result taken = search(first, remaining - unit.slots, dims);
      for (std::size_t i = 0; i < dims.size(); ++i) dims[i] -= unit.dims[i];
      if (taken) {
        taken->second.insert(taken->second.begin(), first);
        if (!best || taken->first < best->first) best = std::move(taken);
      }
    }
    memo_.emplace(key, best);
    return best;
  }

  const std::vector<UnitShape>& units_;
  std::unordered_map<std::string, Result> memo_;
};

// Whole balanced cycles first, then the best-balanced tail.
std::vector<std::size_t> plan_units(std::string_view label, const std::vector<UnitShape>& cycle,
                                    std::uint64_t quota, std::vector<std::string>& warnings) {
  std::uint64_t block = 0;
  for (const auto& u : cycle) block += u.slots;
  std::vector<std::size_t> plan;
  for (std::uint64_t n = 0; n < quota / block; ++n) {
    for (std::size_t i = 0; i < cycle.size(); ++i) plan.push_back(i);
  }
  std::uint64_t rest = quota % block;
  if (rest == 0) return plan;

  TailPlanner planner(cycle);
  auto tail = planner.solve(rest);
  if (!tail) {
    std::string sizes;
    std::set<std::uint64_t> seen;
    for (const auto& u : cycle) seen.insert(u.slots);
    for (auto s : seen) sizes += (sizes.empty() ? "" : ", ") + std::to_string(s);
    throw Error(ErrorCode::QuotaInfeasible, std::string(label) + ": quota " + std::to_string(quota) +
                                                " cannot be composed from units of {" + sizes + "} slots");
  }
  if (tail->first.max_abs > 1) {
    throw Error(ErrorCode::QuotaInfeasible,
                std::string(label) + ": quota " + std::to_string(quota) +
                    " cannot be balanced (best achievable split differs by " + std::to_string(tail->first.max_abs) +
                    "); use a multiple of " + std::to_string(block));
  }
  if (tail->first.max_abs == 1) {
    warnings.push_back(std::string(label) + ": quota " + std::to_string(quota) +
                       " cannot split evenly; balanced to within 1");
  }
  plan.insert(plan.end(), tail->second.begin(), tail->second.end());
  return plan;
}

class SuiteBuilder {
 public:
  explicit SuiteBuilder(const SuiteManifest& m) : m_(m) {}

  GeneratedSuite build() {
    validate_lists();
    build_one_person_known();
    build_two_person_known();
    build_one_person_partial();
    build_two_person_partial();
    build_char_stereotype();
    build_adverb_stereotype();
    shuffle();
    return std::move(out_);
  }

 private:
  std::uint64_t quota(TemplateFamily f, QuotaCondition c) const {
    auto it = m_.quotas.find({f, c});
    return it == m_.quotas.end() ? 0 : it->second;
  }

  void validate_lists() const {
    std::set<std::string> seen;
    for (const auto& a : m_.adjectives) {
      if (a.empty()) throw Error(ErrorCode::InvalidManifest, "empty adjective in manifest");
      if (!seen.insert(a).second) throw Error(ErrorCode::InvalidManifest, "duplicate adjective '" + a + "'");
    }
    for (const auto& [key, n] : m_.quotas) {
      if (!is_valid_quota_key(key)) throw Error(ErrorCode::InvalidManifest, "unknown quota key " + to_string(key));
    }
    for (const auto& p : m_.descriptor_pairs) {
      if (p.feminine.adjective.empty() || p.feminine.occupation.empty() || p.masculine.adjective.empty() ||
          p.masculine.occupation.empty()) {
        throw Error(ErrorCode::InvalidManifest, "descriptor pair with an empty adjective or occupation");
      }
    }
  }

  void need_adjectives(std::string_view label, std::size_t n) const {
    if (m_.adjectives.size() < n) {
      throw Error(ErrorCode::QuotaInfeasible, std::string(label) + ": limiting list 'adjectives' has " +
                                                  std::to_string(m_.adjectives.size()) + " entries, need at least " +
                                                  std::to_string(n) + " distinct");
    }
  }

  void warn_repeats(std::string_view label, std::uint64_t units, std::uint64_t distinct) {
    if (units > distinct) {
      out_.warnings.push_back(std::string(label) + ": " + std::to_string(units) + " units exceed " +
                              std::to_string(distinct) + " distinct list combinations; source texts repeat");
    }
  }

  // k-th adjective window of width n for a family whose variant cycle has
  // `variants` entries: variants vary fastest, then the window start.
  Bindings window(std::size_t unit, std::size_t variants, std::size_t n) const {
    std::size_t count = m_.adjectives.size();
    std::size_t start = (unit / variants) % count;
    Bindings b;
    if (n == 1) {
      b["A"] = m_.adjectives[start];
      return b;
    }
    for (std::size_t j = 0; j < n; ++j) b["A" + std::to_string(j + 1)] = m_.adjectives[(start + j) % count];
    return b;
  }

  std::string next_id(TemplateFamily f, char suffix) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%06u", ++sequence_[static_cast<int>(f)]);
    return std::string(family_tag(f)) + "-" + buf + suffix;
  }

  TestInstance& emit(TemplateFamily f, const Bindings& b, char suffix) {
    out_.instances.push_back(expand_template(f, b, next_id(f, suffix)));
    return out_.instances.back();
  }

  static void link(TestInstance& a, TestInstance& b) {
    a.pair_id = b.id;
    b.pair_id = a.id;
  }

  static int sign(bool feminine) { return feminine ? 1 : -1; }

  struct OnePersonVariant {
    bool first_f;
    bool self;
    bool bracket;
  };

  // Gender alternates fastest; bracket flips every second pair of variants.
  static std::vector<OnePersonVariant> one_person_cycle() {
    return {{true, true, true},   {false, true, true},   {true, false, false}, {false, false, false},
            {true, false, true},  {false, false, true},  {true, true, false},  {false, true, false}};
  }

  void build_one_person_known() {
    auto family = TemplateFamily::T1_OnePersonKnown;
    std::uint64_t q = quota(family, QuotaCondition::Det);
    if (q == 0) return;
    need_adjectives("T1", 2);
    auto cycle = one_person_cycle();
    std::vector<UnitShape> shapes;
    for (const auto& v : cycle) {
      std::uint64_t slots = v.bracket ? 3 : 2;
      bool referent_f = v.self ? v.first_f : !v.first_f;
      shapes.push_back({slots, {sign(referent_f) * static_cast<int>(slots)}});
    }
    auto plan = plan_units("T1-Det", shapes, q, out_.warnings);
    warn_repeats("T1", plan.size(), cycle.size() * m_.adjectives.size());
    for (std::size_t k = 0; k < plan.size(); ++k) {
      const auto& v = cycle[plan[k]];
      Bindings b = window(k, cycle.size(), 2);
      b[binding::kFirstCharacter] = v.first_f ? "woman" : "man";
      b[binding::kFirstClaim] = v.self ? "I'm" : "you're";
      b[binding::kBracket] = v.bracket ? "yes" : "no";
      emit(family, b, 'd');
    }
  }

  void build_two_person_known() {
    auto family = TemplateFamily::T2_TwoPersonKnown;
    std::uint64_t q = quota(family, QuotaCondition::Det);
    if (q == 0) return;
    need_adjectives("T2", 4);
    std::vector<UnitShape> shapes = {{4, {1}}, {4, {-1}}};
    auto plan = plan_units("T2-Det", shapes, q, out_.warnings);
    warn_repeats("T2", plan.size(), shapes.size() * m_.adjectives.size());
    for (std::size_t k = 0; k < plan.size(); ++k) {
      Bindings b = window(k, shapes.size(), 4);
      b[binding::kFirstCharacter] = plan[k] == 0 ? "woman" : "man";
      emit(family, b, 'd');
    }
  }

  void build_one_person_partial() {
    auto family = TemplateFamily::T3_OnePersonPartial;
    std::uint64_t det = quota(family, QuotaCondition::Det);
    std::uint64_t amb = quota(family, QuotaCondition::Amb);
    if (det == 0 && amb == 0) return;
    if (det != amb) {
      throw Error(ErrorCode::QuotaInfeasible, "T3: Det and Amb quotas must be equal (paired instances), got " +
                                                  std::to_string(det) + " and " + std::to_string(amb));
    }
    need_adjectives("T3", 2);
    // Here first_f is the gender of the non-narrator character.
    auto cycle = one_person_cycle();
    std::vector<UnitShape> shapes;
    for (const auto& v : cycle) {
      std::uint64_t slots = v.bracket ? 3 : 2;
      shapes.push_back({slots, {sign(v.first_f) * static_cast<int>(slots)}});
    }
    auto plan = plan_units("T3-Det", shapes, det, out_.warnings);
    warn_repeats("T3", plan.size(), cycle.size() * m_.adjectives.size());
    for (std::size_t k = 0; k < plan.size(); ++k) {
      const auto& v = cycle[plan[k]];
      Bindings b = window(k, cycle.size(), 2);
      b[binding::kOtherCharacter] = v.first_f ? "woman" : "man";
      b[binding::kFirstClaim] = v.self ? "I'm" : "you're";
      b[binding::kBracket] = v.bracket ? "yes" : "no";
      // The described person is "I" in the ambiguous member of the pair and
      // the named character in the determined one.
      b[binding::kNarrator] = v.self ? "second" : "first";
      emit(family, b, 'd');
      std::size_t det_index = out_.instances.size() - 1;
      b[binding::kNarrator] = v.self ? "first" : "second";
      auto& a = emit(family, b, 'a');
      link(out_.instances[det_index], a);
    }
  }

  void build_two_person_partial() {
    auto family = TemplateFamily::T4_TwoPersonPartial;
    std::uint64_t det = quota(family, QuotaCondition::Det);
    std::uint64_t amb = quota(family, QuotaCondition::Amb);
    if (det == 0 && amb == 0) return;
    if (det != amb) {
      throw Error(ErrorCode::QuotaInfeasible, "T4: Det and Amb quotas must be equal (half of every instance is "
                                              "ambiguous), got " + std::to_string(det) + " and " + std::to_string(amb));
    }
    need_adjectives("T4", 4);
    // One unit is a pair of instances (narrator second, narrator first) with
    // the same adjectives and other character: 4 determined slots.
    std::vector<UnitShape> shapes = {{4, {4}}, {4, {-4}}};
    auto plan = plan_units("T4-Det", shapes, det, out_.warnings);
    warn_repeats("T4", plan.size(), shapes.size() * m_.adjectives.size());
    for (std::size_t k = 0; k < plan.size(); ++k) {
      Bindings b = window(k, shapes.size(), 4);
      b[binding::kOtherCharacter] = plan[k] == 0 ? "woman" : "man";
      b[binding::kNarrator] = "second";
      emit(family, b, 'd');
      std::size_t det_index = out_.instances.size() - 1;
      b[binding::kNarrator] = "first";
      auto& a = emit(family, b, 'a');
      link(out_.instances[det_index], a);
    }
  }

  void build_char_stereotype() {
    auto family = TemplateFamily::T5_CharStereotype;
    std::uint64_t det = quota(family, QuotaCondition::Det);
    std::uint64_t amb = quota(family, QuotaCondition::Amb);
    if (det == 0 && amb == 0) return;
    if (det != 2 * amb) {
      throw Error(ErrorCode::QuotaInfeasible, "T5: Det quota must be twice the Amb quota (he/she vs they), got " +
                                                  std::to_string(det) + " and " + std::to_string(amb));
    }
    need_adjectives("T5", 1);
    if (m_.descriptor_pairs.empty()) {
      throw Error(ErrorCode::QuotaInfeasible, "T5: limiting list 'descriptor_pairs' is empty");
    }
    // A unit is a he/she/they triple; orientation says which descriptor of
    // the pair is the smiling (presumed speaking) character.
    std::vector<UnitShape> shapes = {{2, {1}}, {2, {-1}}};
    auto plan = plan_units("T5-Det", shapes, det, out_.warnings);
    std::size_t pairs = m_.descriptor_pairs.size();
    warn_repeats("T5", plan.size(), 2 * pairs * m_.adjectives.size());
    for (std::size_t k = 0; k < plan.size(); ++k) {
      bool cue_f = plan[k] == 0;
      std::size_t combo = k / 2;
      const DescriptorPair& pair = m_.descriptor_pairs[combo % pairs];
      const Descriptor& speaker = cue_f ? pair.feminine : pair.masculine;
      const Descriptor& other = cue_f ? pair.masculine : pair.feminine;
      Bindings b;
      b["A"] = m_.adjectives[(combo / pairs) % m_.adjectives.size()];
      b[binding::kCharacter] = speaker.text();
      b[binding::kOppositeCharacter] = other.text();
      b[binding::kDescriptorAdjective] = speaker.adjective;
      b[binding::kOccupation] = speaker.occupation;
      b[binding::kStereotype] = cue_f ? "F" : "M";
      b[binding::kOppositeStereotype] = cue_f ? "M" : "F";

      b[binding::kPronoun] = "he";
      emit(family, b, 'd');
      std::size_t he = out_.instances.size() - 1;
      b[binding::kPronoun] = "she";
      emit(family, b, 'd');
      std::size_t she = out_.instances.size() - 1;
      b[binding::kPronoun] = "they";
      emit(family, b, 'a');
      TestInstance& they = out_.instances.back();
      out_.instances[he].pair_id = they.id;
      out_.instances[she].pair_id = they.id;
      they.pair_id = out_.instances[cue_f ? she : he].id;
    }
  }

  void build_adverb_stereotype() {
    auto family = TemplateFamily::T7_AdverbStereotype;
    std::uint64_t neutral = quota(family, QuotaCondition::None);
    std::uint64_t masc = quota(family, QuotaCondition::StereoM);
    std::uint64_t fem = quota(family, QuotaCondition::StereoF);
    if (neutral + masc + fem == 0) return;
    need_adjectives("T7", 1);
    if (masc != fem) {
      out_.warnings.push_back("T7: StereoM and StereoF quotas differ (" + std::to_string(masc) + " vs " +
                              std::to_string(fem) + "); binary stereotypes are not balanced");
    }
    std::size_t count = m_.adjectives.size();
    warn_repeats("T7-None", neutral, count);

    std::map<std::string, std::string> neutral_ids;
    for (std::uint64_t k = 0; k < neutral; ++k) {
      Bindings b;
      b["A"] = m_.adjectives[k % count];
      auto& inst = emit(family, b, 'a');
      neutral_ids.emplace(b["A"], inst.id);
    }
    auto stereo = [&](std::uint64_t q, const std::vector<std::string>& adverbs, const char* label, const char* flag) {
      if (q == 0) return;
      if (adverbs.empty()) {
        throw Error(ErrorCode::QuotaInfeasible, std::string("T7: limiting list '") + label + "' is empty");
      }
      warn_repeats(std::string("T7-") + label, q, count * adverbs.size());
      for (std::uint64_t k = 0; k < q; ++k) {
        Bindings b;
        b["A"] = m_.adjectives[(k / adverbs.size()) % count];
        b[binding::kAdverb] = adverbs[k % adverbs.size()];
        b[binding::kAdverbStereotype] = flag;
        auto& inst = emit(family, b, 'a');
        if (auto it = neutral_ids.find(b["A"]); it != neutral_ids.end()) inst.pair_id = it->second;
      }
    };
    stereo(masc, m_.masculine_adverbs, "masculine_adverbs", "M");
    stereo(fem, m_.feminine_adverbs, "feminine_adverbs", "F");
  }

  // Fisher-Yates with an explicit unbiased draw, so the order is identical
  // across standard library implementations.
  void shuffle() {
    std::mt19937_64 rng(m_.seed);
    auto& v = out_.instances;
    for (std::size_t i = v.size(); i > 1; --i) {
      std::uint64_t bound = i;
      std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
      std::uint64_t r;
      do {
        r = rng();
      } while (r >= limit);
      std::swap(v[i - 1], v[r % bound]);
    }
  }

  const SuiteManifest& m_;
  GeneratedSuite out_;
  unsigned sequence_[6] = {};
};

}  // namespace

std::string_view family_tag(TemplateFamily family) { return kTags[static_cast<int>(family)]; }

TemplateFamily parse_family(std::string_view tag) {
  for (auto f : kAllFamilies) {
    if (family_tag(f) == tag) return f;
  }
  throw Error(ErrorCode::ParseError, "unknown template family '" + std::string(tag) + "'");
}

std::string to_string(QuotaKey key) {
  static constexpr std::string_view names[] = {"Det", "Amb", "None", "StereoM", "StereoF"};
  return std::string(family_tag(key.family)) + "-" + std::string(names[static_cast<int>(key.condition)]);
}

bool is_valid_quota_key(QuotaKey key) {
  using F = TemplateFamily;
  using C = QuotaCondition;
  switch (key.family) {
    case F::T1_OnePersonKnown:
    case F::T2_TwoPersonKnown:
      return key.condition == C::Det;
    case F::T3_OnePersonPartial:
    case F::T4_TwoPersonPartial:
    case F::T5_CharStereotype:
      return key.condition == C::Det || key.condition == C::Amb;
    case F::T7_AdverbStereotype:
      return key.condition == C::None || key.condition == C::StereoM || key.condition == C::StereoF;
  }
  return false;
}

QuotaKey parse_quota_key(std::string_view s) {
  auto dash = s.find('-');
  if (dash == std::string_view::npos) {
    throw Error(ErrorCode::InvalidManifest, "quota key '" + std::string(s) + "' is not of the form T<n>-<condition>");
  }
  QuotaKey key{};
  try {
    key.family = parse_family(s.substr(0, dash));
  } catch (const Error&) {
    throw Error(ErrorCode::InvalidManifest, "quota key '" + std::string(s) + "' names an unknown family");
  }
  std::string_view cond = s.substr(dash + 1);
  if (cond == "Det") key.condition = QuotaCondition::Det;
  else if (cond == "Amb") key.condition = QuotaCondition::Amb;
  else if (cond == "None") key.condition = QuotaCondition::None;
  else if (cond == "StereoM") key.condition = QuotaCondition::StereoM;
  else if (cond == "StereoF") key.condition = QuotaCondition::StereoF;
  else throw Error(ErrorCode::InvalidManifest, "quota key '" + std::string(s) + "' has an unknown condition");
  if (!is_valid_quota_key(key)) {
    throw Error(ErrorCode::InvalidManifest, "quota key '" + std::string(s) + "' is not defined for that family");
  }
  return key;
}

QuotaKey quota_key_of(TemplateFamily family, const AdjectiveSlot& slot) {
  if (family == TemplateFamily::T7_AdverbStereotype) {
    switch (slot.stereotype.kind) {
      case StereotypeKind::None: return {family, QuotaCondition::None};
      case StereotypeKind::Masculine: return {family, QuotaCondition::StereoM};
      case StereotypeKind::Feminine: return {family, QuotaCondition::StereoF};
    }
  }
  return {family, slot.gender.determined() ? QuotaCondition::Det : QuotaCondition::Amb};
}

QuotaMap full_scale_quotas() {
  using F = TemplateFamily;
  using C = QuotaCondition;
  return {
      {{F::T1_OnePersonKnown, C::Det}, 2400},   {{F::T2_TwoPersonKnown, C::Det}, 3840},
      {{F::T3_OnePersonPartial, C::Det}, 1200}, {{F::T3_OnePersonPartial, C::Amb}, 1200},
      {{F::T4_TwoPersonPartial, C::Det}, 1920}, {{F::T4_TwoPersonPartial, C::Amb}, 1920},
      {{F::T5_CharStereotype, C::Det}, 352},    {{F::T5_CharStereotype, C::Amb}, 176},
      {{F::T7_AdverbStereotype, C::None}, 130}, {{F::T7_AdverbStereotype, C::StereoM}, 390},
      {{F::T7_AdverbStereotype, C::StereoF}, 390},
  };
}

TestInstance expand_template(TemplateFamily family, const Bindings& bindings, std::string id) {
  TestInstance inst;
  switch (family) {
    case TemplateFamily::T1_OnePersonKnown: inst = expand_one_person_known(bindings); break;
    case TemplateFamily::T2_TwoPersonKnown: inst = expand_two_person_known(bindings); break;
    case TemplateFamily::T3_OnePersonPartial: inst = expand_one_person_partial(bindings); break;
    case TemplateFamily::T4_TwoPersonPartial: inst = expand_two_person_partial(bindings); break;
    case TemplateFamily::T5_CharStereotype: inst = expand_char_stereotype(bindings); break;
    case TemplateFamily::T7_AdverbStereotype: inst = expand_adverb_stereotype(bindings); break;
  }
  inst.id = std::move(id);
  inst.bindings = bindings;
  return inst;
}

GeneratedSuite generate_suite(const SuiteManifest& manifest) { return SuiteBuilder(manifest).build(); }

std::size_t count_slots(std::span<const TestInstance> suite) {
  std::size_t n = 0;
  for (const auto& inst : suite) n += inst.slots.size();
  return n;
}

}  // namespace gnt
