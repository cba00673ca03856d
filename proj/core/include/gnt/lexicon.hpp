#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gnt/language.hpp"

namespace gnt {

enum class GenderLabel {
  Masculine,
  Feminine,
  N1_CommonForm,
  N2_NeuterCase,
  N3_AltPartOfSpeech,
  N4_SourceCopy,
  N5_AltMorphology,
  Unmatched,
};

inline constexpr GenderLabel kAllLabels[] = {
    GenderLabel::Masculine,          GenderLabel::Feminine,      GenderLabel::N1_CommonForm,
    GenderLabel::N2_NeuterCase,      GenderLabel::N3_AltPartOfSpeech, GenderLabel::N4_SourceCopy,
    GenderLabel::N5_AltMorphology,   GenderLabel::Unmatched,
};

std::string_view to_string(GenderLabel label);  // "M", "F", "N1".."N5", "U"
GenderLabel parse_label(std::string_view s);
constexpr bool is_neutral(GenderLabel l) {
  return l == GenderLabel::N1_CommonForm || l == GenderLabel::N2_NeuterCase || l == GenderLabel::N3_AltPartOfSpeech ||
         l == GenderLabel::N4_SourceCopy || l == GenderLabel::N5_AltMorphology;
}

enum class FormGender { MasculineOnly, FeminineOnly, NeuterCase, CommonForm };

std::string_view to_string(FormGender g);  // "m", "f", "neu", "common"
FormGender parse_form_gender(std::string_view s);
GenderLabel label_for(FormGender g);

struct LexiconEntry {
  std::string english_lemma;
  Language language = Language::ES;
  std::string surface_form;  // a single token; diacritics significant
  FormGender form_gender = FormGender::CommonForm;

  bool operator==(const LexiconEntry&) const = default;
};

struct AltPhraseEntry {
  std::string english_lemma;
  Language language = Language::ES;
  std::string phrase;
};

enum class PatternKind { SlashSuffix, ParenSuffix, AtSign };

std::string_view to_string(PatternKind k);  // "slash", "paren", "at"
PatternKind parse_pattern_kind(std::string_view s);

// One alternative-morphology annotation. `alternatives` are the gendered
// endings the annotation stands for; an empty string means the bare stem.
//   slash "o/a"  : stem + "o/a" or stem + "(o/a)"  -> stem+o, stem+a
//   paren "(ur)" : stem + "(ur)"                   -> stem, stem+ur
//   at    "o/a"  : stem + "@"                      -> stem+o, stem+a
struct MorphPattern {
  Language language = Language::ES;
  PatternKind kind = PatternKind::SlashSuffix;
  std::string template_text;
  std::vector<std::string> alternatives;

  // Folded candidate forms for a token, or empty if the token does not carry
  // this annotation.
  std::vector<std::string> candidates(std::string_view folded_token) const;
  std::string description() const;
};

MorphPattern make_pattern(Language lang, PatternKind kind, std::string_view template_text);

// Immutable after construction; safe to share between threads.
class Lexicon {
 public:
  struct Form {
    std::string surface;  // as written in the lexicon
    FormGender gender;
  };

  // Validates and indexes the rows. Identical rows are merged; contradictory
  // genders for one (lemma, form) throw LexiconConflict; a neuter row for a
  // language without neuter case throws InvalidEntry.
  Lexicon(Language lang, std::vector<LexiconEntry> entries, std::vector<AltPhraseEntry> alt_phrases = {},
          std::vector<MorphPattern> patterns = {});

  Language language() const { return lang_; }
  std::size_t lemma_count() const { return by_lemma_.size(); }
  std::size_t form_count() const;
  const std::vector<LexiconEntry>& entries() const { return entries_; }
  const std::vector<MorphPattern>& patterns() const { return patterns_; }

  // Forms of a lemma keyed by folded surface form.
  const std::map<std::string, Form>* forms(std::string_view lemma) const;
  // Lexicon rows whose surface form folds to `folded`.
  std::vector<LexiconEntry> entries_for_form(std::string_view folded) const;
  // Folded token sequences of the lemma's alternative phrases, in file order.
  const std::vector<std::pair<std::string, std::vector<std::string>>>* alt_phrases(std::string_view lemma) const;

 private:
  Language lang_;
  std::vector<LexiconEntry> entries_;
  std::vector<MorphPattern> patterns_;
  std::map<std::string, std::map<std::string, Form>, std::less<>> by_lemma_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> by_form_;
  std::map<std::string, std::vector<std::pair<std::string, std::vector<std::string>>>, std::less<>> phrases_;
};

// Reads lexicon_<lang>.csv (lemma,form,gender) plus the optional
// alt_<lang>.csv (lemma,phrase) and patterns_<lang>.csv (kind,template).
Lexicon load_lexicon(Language lang, const std::filesystem::path& dir);

// In-memory variants of the three CSV readers; `source` names the input in
// error messages.
std::vector<LexiconEntry> parse_lexicon_csv(Language lang, std::string_view csv, std::string_view source = "lexicon");
std::vector<AltPhraseEntry> parse_alt_phrase_csv(Language lang, std::string_view csv, std::string_view source = "alt");
std::vector<MorphPattern> parse_pattern_csv(Language lang, std::string_view csv, std::string_view source = "patterns");

}  // namespace gnt
