#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gnt {

// One template shape per family. T6 is the character-descriptor rule
// (C_g = a_g occ_g) used inside T5, so there is no T6 family.
enum class TemplateFamily {
  T1_OnePersonKnown,
  T2_TwoPersonKnown,
  T3_OnePersonPartial,
  T4_TwoPersonPartial,
  T5_CharStereotype,
  T7_AdverbStereotype,
};

inline constexpr TemplateFamily kAllFamilies[] = {
    TemplateFamily::T1_OnePersonKnown,   TemplateFamily::T2_TwoPersonKnown,
    TemplateFamily::T3_OnePersonPartial, TemplateFamily::T4_TwoPersonPartial,
    TemplateFamily::T5_CharStereotype,   TemplateFamily::T7_AdverbStereotype,
};

std::string_view family_tag(TemplateFamily family);  // "T1" ... "T7"
TemplateFamily parse_family(std::string_view tag);

enum class GenderKind { DeterminedMasculine, DeterminedFeminine, Ambiguous };
enum class AmbiguityKind { None, Omission, Active };

struct GenderCondition {
  GenderKind kind = GenderKind::Ambiguous;
  AmbiguityKind ambiguity = AmbiguityKind::Omission;

  static GenderCondition masculine() { return {GenderKind::DeterminedMasculine, AmbiguityKind::None}; }
  static GenderCondition feminine() { return {GenderKind::DeterminedFeminine, AmbiguityKind::None}; }
  static GenderCondition omission() { return {GenderKind::Ambiguous, AmbiguityKind::Omission}; }
  static GenderCondition active() { return {GenderKind::Ambiguous, AmbiguityKind::Active}; }

  bool determined() const { return kind != GenderKind::Ambiguous; }
  bool operator==(const GenderCondition&) const = default;
};

enum class StereotypeKind { None, Masculine, Feminine };

struct StereotypeCondition {
  StereotypeKind kind = StereotypeKind::None;
  std::string cue;  // empty iff kind == None

  bool operator==(const StereotypeCondition&) const = default;
};

enum class Referent { Speaker, Listener };

struct AdjectiveSlot {
  std::size_t slot_index = 0;
  std::string english_lemma;
  Referent referent = Referent::Speaker;
  GenderCondition gender;
  StereotypeCondition stereotype;

  bool operator==(const AdjectiveSlot&) const = default;
};

using Bindings = std::map<std::string, std::string>;

struct TestInstance {
  std::string id;
  TemplateFamily family = TemplateFamily::T1_OnePersonKnown;
  std::string source_text;
  std::vector<AdjectiveSlot> slots;
  std::optional<std::string> pair_id;
  Bindings bindings;

  bool operator==(const TestInstance&) const = default;
};

// Quotas are keyed by family and the condition a slot lands in. T7 slots are
// all ambiguous by omission, so T7 is keyed by stereotype instead.
enum class QuotaCondition { Det, Amb, None, StereoM, StereoF };

struct QuotaKey {
  TemplateFamily family;
  QuotaCondition condition;

  auto operator<=>(const QuotaKey&) const = default;
};

std::string to_string(QuotaKey key);          // "T3-Amb"
QuotaKey parse_quota_key(std::string_view s);  // throws InvalidManifest
bool is_valid_quota_key(QuotaKey key);
QuotaKey quota_key_of(TemplateFamily family, const AdjectiveSlot& slot);

using QuotaMap = std::map<QuotaKey, std::uint64_t>;

// The per-family slot counts of the reference suite subsets.
QuotaMap full_scale_quotas();

struct Descriptor {
  std::string adjective;   // a_g, e.g. "pretty"
  std::string occupation;  // occ_g, e.g. "nurse"

  std::string text() const { return adjective + " " + occupation; }
  bool operator==(const Descriptor&) const = default;
};

// A stereotype-matched pair of character descriptors.
struct DescriptorPair {
  Descriptor feminine;
  Descriptor masculine;

  bool operator==(const DescriptorPair&) const = default;
};

struct SuiteManifest {
  std::vector<std::string> adjectives;
  std::vector<DescriptorPair> descriptor_pairs;
  std::vector<std::string> masculine_adverbs;
  std::vector<std::string> feminine_adverbs;
  QuotaMap quotas;
  std::uint64_t seed = 0;

  bool operator==(const SuiteManifest&) const = default;
};

// Binding keys understood by expand_template.
namespace binding {
inline constexpr const char* kFirstCharacter = "first_character";  // woman | man
inline constexpr const char* kOtherCharacter = "other_character";  // woman | man
inline constexpr const char* kFirstClaim = "first_claim";          // I'm | you're
inline constexpr const char* kBracket = "bracket";                 // yes | no
inline constexpr const char* kNarrator = "narrator";               // first | second
inline constexpr const char* kPronoun = "pronoun";                 // he | she | they
inline constexpr const char* kCharacter = "C_g";
inline constexpr const char* kOppositeCharacter = "C_gbar";
inline constexpr const char* kStereotype = "stereotype";           // F | M (gender cued by C_g)
inline constexpr const char* kOppositeStereotype = "stereotype_gbar";
inline constexpr const char* kDescriptorAdjective = "a_g";
inline constexpr const char* kOccupation = "occ_g";
inline constexpr const char* kAdverb = "adverb";
inline constexpr const char* kAdverbStereotype = "adverb_stereotype";  // F | M
}  // namespace binding

// Expands one template. Adjectives are bound as "A" (T5, T7) or "A1".."A4".
// Throws MissingBinding / InconsistentBinding.
TestInstance expand_template(TemplateFamily family, const Bindings& bindings, std::string id = {});

struct GeneratedSuite {
  std::vector<TestInstance> instances;
  std::vector<std::string> warnings;
};

// Fills every quota exactly, balanced by construction, then shuffles the
// instance order with the manifest seed. Throws QuotaInfeasible.
GeneratedSuite generate_suite(const SuiteManifest& manifest);

std::size_t count_slots(std::span<const TestInstance> suite);

// ---- balance diagnostics ---------------------------------------------------

enum class ViolationKind {
  CountMismatch,
  GenderImbalance,
  PositionImbalance,
  PronounImbalance,
  StereotypeImbalance,
  PairingBroken,
  Leakage,
  Malformed,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string family;
  std::string detail;
};

struct FamilyBalance {
  std::map<std::string, std::uint64_t> slots_by_condition;  // "Det", "Amb", ...
  std::uint64_t instances = 0;
  std::uint64_t feminine_slots = 0;   // determined slots only
  std::uint64_t masculine_slots = 0;
  std::uint64_t narrator_first = 0;   // T3/T4 instances
  std::uint64_t narrator_second = 0;
  std::map<std::string, std::uint64_t> pronoun_instances;              // T5
  std::map<std::string, std::uint64_t> masculine_cues_by_pronoun;      // T5
  std::map<std::string, std::uint64_t> feminine_cues_by_pronoun;       // T5
  std::uint64_t masculine_cue_slots = 0;
  std::uint64_t feminine_cue_slots = 0;
};

struct BalanceDiagnostics {
  std::map<std::string, FamilyBalance> families;  // keyed by family tag
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::size_t count(ViolationKind kind) const;
};

// Structural checks only; count ratios are inferred from the pairing scheme.
BalanceDiagnostics validate_balance(std::span<const TestInstance> suite);
// Also checks every slot count against the expected quotas.
BalanceDiagnostics validate_balance(std::span<const TestInstance> suite, const QuotaMap& expected);

}  // namespace gnt
