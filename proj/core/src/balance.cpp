#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_map>

#include "gnt/suite.hpp"

namespace gnt {

namespace {

using F = TemplateFamily;

std::string condition_name(QuotaKey key) {
  std::string s = to_string(key);
  return s.substr(s.find('-') + 1);
}

std::uint64_t absdiff(std::uint64_t a, std::uint64_t b) { return a > b ? a - b : b - a; }

std::string binding_or_empty(const TestInstance& inst, const char* key) {
  auto it = inst.bindings.find(key);
  return it == inst.bindings.end() ? std::string() : it->second;
}

// Lower-cased alphabetic words of an English text.
std::vector<std::string> words(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

const std::set<std::string>& gendered_words() {
  static const std::set<std::string> w = {"he",      "she",     "him",   "her",   "his",  "hers",
                                          "himself", "herself", "man",   "woman", "boy",  "girl",
                                          "mr",      "mrs",     "ms",    "sir",   "madam"};
  return w;
}

class Checker {
 public:
  explicit Checker(std::span<const TestInstance> suite) : suite_(suite) {
    for (const auto& inst : suite_) by_id_.emplace(inst.id, &inst);
  }

  BalanceDiagnostics run(const QuotaMap* expected) {
    for (const auto& inst : suite_) {
      check_shape(inst);
      tally(inst);
      check_pairing(inst);
      check_leakage(inst);
    }
    if (expected) {
      check_quotas(*expected);
    } else {
      check_ratios();
    }
    check_splits();
    return std::move(out_);
  }

 private:
  void flag(ViolationKind kind, TemplateFamily f, std::string detail) {
    out_.violations.push_back({kind, std::string(family_tag(f)), std::move(detail)});
  }

  void check_shape(const TestInstance& inst) {
    const auto& text = inst.source_text;
    if (text.find_first_of("{}[]") != std::string::npos) {
      flag(ViolationKind::Malformed, inst.family, inst.id + ": residual template characters");
    }
    std::size_t expected_slots = 0;
    switch (inst.family) {
      case F::T1_OnePersonKnown:
      case F::T3_OnePersonPartial:
        expected_slots = binding_or_empty(inst, binding::kBracket) == "yes" ? 3 : 2;
        break;
      case F::T2_TwoPersonKnown:
      case F::T4_TwoPersonPartial: expected_slots = 4; break;
      case F::T5_CharStereotype:
      case F::T7_AdverbStereotype: expected_slots = 1; break;
    }
    if (inst.slots.size() != expected_slots) {
      flag(ViolationKind::Malformed, inst.family,
           inst.id + ": " + std::to_string(inst.slots.size()) + " slots, expected " + std::to_string(expected_slots));
    }
    for (std::size_t i = 0; i < inst.slots.size(); ++i) {
      const auto& slot = inst.slots[i];
      if (slot.slot_index != i) {
        flag(ViolationKind::Malformed, inst.family, inst.id + ": slot indices are not contiguous from 0");
      }
      if (slot.english_lemma.empty() || text.find(slot.english_lemma) == std::string::npos) {
        flag(ViolationKind::Malformed, inst.family, inst.id + ": lemma '" + slot.english_lemma + "' not in text");
      }
      bool none = slot.gender.ambiguity == AmbiguityKind::None;
      if (none != slot.gender.determined()) {
        flag(ViolationKind::Malformed, inst.family, inst.id + ": ambiguity kind contradicts gender kind");
      }
      if (slot.gender.ambiguity == AmbiguityKind::Active &&
          !(inst.family == F::T5_CharStereotype && binding_or_empty(inst, binding::kPronoun) == "they")) {
        flag(ViolationKind::Malformed, inst.family, inst.id + ": active ambiguity outside a T5 'they' instance");
      }
      if (slot.gender.ambiguity == AmbiguityKind::Omission && inst.family != F::T3_OnePersonPartial &&
          inst.family != F::T4_TwoPersonPartial && inst.family != F::T7_AdverbStereotype) {
        flag(ViolationKind::Malformed, inst.family, inst.id + ": ambiguity by omission in a determined family");
      }
      if ((slot.stereotype.kind == StereotypeKind::None) != slot.stereotype.cue.empty()) {
        flag(ViolationKind::Malformed, inst.family, inst.id + ": stereotype cue present without a stereotype");
      }
    }
  }

  void tally(const TestInstance& inst) {
    auto& fb = out_.families[std::string(family_tag(inst.family))];
    ++fb.instances;
    for (const auto& slot : inst.slots) {
      QuotaKey key = quota_key_of(inst.family, slot);
      ++observed_[key];
      ++fb.slots_by_condition[condition_name(key)];
      if (slot.gender.kind == GenderKind::DeterminedFeminine) ++fb.feminine_slots;
      if (slot.gender.kind == GenderKind::DeterminedMasculine) ++fb.masculine_slots;
      if (slot.stereotype.kind == StereotypeKind::Masculine) ++fb.masculine_cue_slots;
      if (slot.stereotype.kind == StereotypeKind::Feminine) ++fb.feminine_cue_slots;
    }
    if (inst.family == F::T3_OnePersonPartial || inst.family == F::T4_TwoPersonPartial) {
      std::string narrator = binding_or_empty(inst, binding::kNarrator);
      if (narrator == "first") ++fb.narrator_first;
      else if (narrator == "second") ++fb.narrator_second;
      else flag(ViolationKind::Malformed, inst.family, inst.id + ": missing narrator binding");
    }
    if (inst.family == F::T5_CharStereotype) {
      std::string pron = binding_or_empty(inst, binding::kPronoun);
      ++fb.pronoun_instances[pron];
      for (const auto& slot : inst.slots) {
        if (slot.stereotype.kind == StereotypeKind::Masculine) ++fb.masculine_cues_by_pronoun[pron];
        if (slot.stereotype.kind == StereotypeKind::Feminine) ++fb.feminine_cues_by_pronoun[pron];
      }
      std::string g = binding_or_empty(inst, binding::kStereotype);
      std::string gbar = binding_or_empty(inst, binding::kOppositeStereotype);
      if (!gbar.empty() && g == gbar) {
        flag(ViolationKind::StereotypeImbalance, inst.family,
             inst.id + ": C_g and C_gbar carry the same stereotype");
      }
    }
  }

  static bool has_ambiguous(const TestInstance& inst) {
    return std::any_of(inst.slots.begin(), inst.slots.end(), [](const auto& s) { return !s.gender.determined(); });
  }

  // The partner of an ambiguous instance keeps everything except the
  // perturbation and resolves each ambiguous slot.
  void check_pairing(const TestInstance& inst) {
    if (inst.family != F::T3_OnePersonPartial && inst.family != F::T4_TwoPersonPartial &&
        inst.family != F::T5_CharStereotype) {
      return;
    }
    if (!has_ambiguous(inst)) return;
    auto broken = [&](const std::string& why) { flag(ViolationKind::PairingBroken, inst.family, inst.id + ": " + why); };
    if (!inst.pair_id) return broken("no pair_id");
    auto it = by_id_.find(*inst.pair_id);
    if (it == by_id_.end()) return broken("pair '" + *inst.pair_id + "' is not in the suite");
    const TestInstance& other = *it->second;
    if (other.family != inst.family) return broken("pair is from another family");
    if (other.slots.size() != inst.slots.size()) return broken("pair has a different slot layout");
    for (std::size_t i = 0; i < inst.slots.size(); ++i) {
      if (other.slots[i].english_lemma != inst.slots[i].english_lemma) return broken("pair uses other adjectives");
      if (!inst.slots[i].gender.determined() && !other.slots[i].gender.determined()) {
        return broken("pair leaves slot " + std::to_string(i) + " ambiguous");
      }
    }
    const char* perturbed = inst.family == F::T5_CharStereotype ? binding::kPronoun : binding::kNarrator;
    Bindings a = inst.bindings, b = other.bindings;
    a.erase(perturbed);
    b.erase(perturbed);
    if (a != b) return broken("pair differs beyond the ambiguity perturbation");
  }

  void check_leakage(const TestInstance& inst) {
    if (!has_ambiguous(inst)) return;
    auto ws = words(inst.source_text);
    if (inst.family == F::T5_CharStereotype || inst.family == F::T7_AdverbStereotype) {
      for (const auto& w : ws) {
        if (gendered_words().count(w)) {
          flag(ViolationKind::Leakage, inst.family, inst.id + ": gendered word '" + w + "' in an ambiguous instance");
          return;
        }
      }
      return;
    }
    // T3/T4: the ambiguous referent is the narrator, so only one third-person
    // gender may appear (the named other character).
    bool masc = false, fem = false;
    for (const auto& w : ws) {
      if (w == "he" || w == "him" || w == "his" || w == "man" || w == "himself") masc = true;
      if (w == "she" || w == "her" || w == "hers" || w == "woman" || w == "herself") fem = true;
    }
    const auto& text = inst.source_text;
    bool narrator = text.rfind("I smiled.", 0) == 0 || text.find("I laughed back.") != std::string::npos;
    if ((masc && fem) || !narrator) {
      flag(ViolationKind::Leakage, inst.family, inst.id + ": ambiguous referent is not the first-person narrator");
    }
  }

  void check_quotas(const QuotaMap& expected) {
    std::set<QuotaKey> keys;
    for (const auto& [k, n] : expected) {
      if (n > 0) keys.insert(k);
    }
    for (const auto& [k, n] : observed_) keys.insert(k);
    for (const auto& k : keys) {
      std::uint64_t want = expected.count(k) ? expected.at(k) : 0;
      std::uint64_t got = observed_.count(k) ? observed_.at(k) : 0;
      if (want != got) {
        flag(ViolationKind::CountMismatch, k.family,
             to_string(k) + ": " + std::to_string(got) + " slots, expected " + std::to_string(want));
      }
    }
  }

  std::uint64_t observed(F f, QuotaCondition c) const {
    auto it = observed_.find({f, c});
    return it == observed_.end() ? 0 : it->second;
  }

  void check_ratios() {
    auto ratio = [&](F f, std::uint64_t det, std::uint64_t amb, std::uint64_t factor) {
      if (det != factor * amb) {
        flag(ViolationKind::CountMismatch, f,
             "Det=" + std::to_string(det) + " but Amb=" + std::to_string(amb) + " (expected Det = " +
                 std::to_string(factor) + " x Amb)");
      }
    };
    ratio(F::T3_OnePersonPartial, observed(F::T3_OnePersonPartial, QuotaCondition::Det),
          observed(F::T3_OnePersonPartial, QuotaCondition::Amb), 1);
    ratio(F::T4_TwoPersonPartial, observed(F::T4_TwoPersonPartial, QuotaCondition::Det),
          observed(F::T4_TwoPersonPartial, QuotaCondition::Amb), 1);
    ratio(F::T5_CharStereotype, observed(F::T5_CharStereotype, QuotaCondition::Det),
          observed(F::T5_CharStereotype, QuotaCondition::Amb), 2);
    std::uint64_t m = observed(F::T7_AdverbStereotype, QuotaCondition::StereoM);
    std::uint64_t f = observed(F::T7_AdverbStereotype, QuotaCondition::StereoF);
    if (absdiff(m, f) > 1) {
      flag(ViolationKind::StereotypeImbalance, F::T7_AdverbStereotype,
           "StereoM=" + std::to_string(m) + " vs StereoF=" + std::to_string(f));
    }
  }

  void check_splits() {
    for (const auto& [tag, fb] : out_.families) {
      F f = parse_family(tag);
      if (absdiff(fb.feminine_slots, fb.masculine_slots) > 1) {
        flag(ViolationKind::GenderImbalance, f,
             "determined slots F=" + std::to_string(fb.feminine_slots) + " M=" + std::to_string(fb.masculine_slots));
      }
      if ((f == F::T3_OnePersonPartial || f == F::T4_TwoPersonPartial) &&
          absdiff(fb.narrator_first, fb.narrator_second) > 1) {
        flag(ViolationKind::PositionImbalance, f,
             "narrator first=" + std::to_string(fb.narrator_first) + " second=" + std::to_string(fb.narrator_second));
      }
      if (f == F::T5_CharStereotype) {
        std::uint64_t lo = UINT64_MAX, hi = 0;
        for (const char* p : {"he", "she", "they"}) {
          auto it = fb.pronoun_instances.find(p);
          std::uint64_t n = it == fb.pronoun_instances.end() ? 0 : it->second;
          lo = std::min(lo, n);
          hi = std::max(hi, n);
          auto mi = fb.masculine_cues_by_pronoun.find(p);
          auto fi = fb.feminine_cues_by_pronoun.find(p);
          std::uint64_t mc = mi == fb.masculine_cues_by_pronoun.end() ? 0 : mi->second;
          std::uint64_t fc = fi == fb.feminine_cues_by_pronoun.end() ? 0 : fi->second;
          if (absdiff(mc, fc) > 1) {
            flag(ViolationKind::StereotypeImbalance, f,
                 std::string("pronoun '") + p + "': masculine cues " + std::to_string(mc) + " vs feminine " +
                     std::to_string(fc));
          }
        }
        if (hi - lo > 1) {
          flag(ViolationKind::PronounImbalance, f,
               "he/she/they instance counts differ by " + std::to_string(hi - lo));
        }
      }
    }
  }

  std::span<const TestInstance> suite_;
  std::unordered_map<std::string, const TestInstance*> by_id_;
  std::map<QuotaKey, std::uint64_t> observed_;
  BalanceDiagnostics out_;
};

}  // namespace

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::CountMismatch: return "count-mismatch";
    case ViolationKind::GenderImbalance: return "gender-imbalance";
    case ViolationKind::PositionImbalance: return "position-imbalance";
    case ViolationKind::PronounImbalance: return "pronoun-imbalance";
    case ViolationKind::StereotypeImbalance: return "stereotype-imbalance";
    case ViolationKind::PairingBroken: return "pairing-broken";
    case ViolationKind::Leakage: return "leakage";
    case ViolationKind::Malformed: return "malformed";
  }
  return "?";
}

std::size_t BalanceDiagnostics::count(ViolationKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(violations.begin(), violations.end(), [kind](const Violation& v) { return v.kind == kind; }));
}

BalanceDiagnostics validate_balance(std::span<const TestInstance> suite) { return Checker(suite).run(nullptr); }

BalanceDiagnostics validate_balance(std::span<const TestInstance> suite, const QuotaMap& expected) {
  return Checker(suite).run(&expected);
}

}  // namespace gnt
