#include "gnt/lexicon.hpp"

#include <algorithm>

#include "csv.hpp"
#include "gnt/error.hpp"
#include "gnt/text.hpp"

namespace gnt {

namespace {

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return c == ' ' || c == '\t'; };
  while (!s.empty() && ws(s.back())) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && ws(s[i])) ++i;
  return s.substr(i);
}

std::string describe(const LexiconEntry& e) {
  return "(" + e.english_lemma + ", " + e.surface_form + ", " + std::string(to_string(e.form_gender)) + ")";
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

std::string_view to_string(GenderLabel label) {
  switch (label) {
    case GenderLabel::Masculine: return "M";
    case GenderLabel::Feminine: return "F";
    case GenderLabel::N1_CommonForm: return "N1";
    case GenderLabel::N2_NeuterCase: return "N2";
    case GenderLabel::N3_AltPartOfSpeech: return "N3";
    case GenderLabel::N4_SourceCopy: return "N4";
    case GenderLabel::N5_AltMorphology: return "N5";
    case GenderLabel::Unmatched: return "U";
  }
  return "?";
}

GenderLabel parse_label(std::string_view s) {
  for (auto l : kAllLabels) {
    if (to_string(l) == s) return l;
  }
  throw Error(ErrorCode::ParseError, "unknown label '" + std::string(s) + "'");
}

std::string_view to_string(FormGender g) {
  switch (g) {
    case FormGender::MasculineOnly: return "m";
    case FormGender::FeminineOnly: return "f";
    case FormGender::NeuterCase: return "neu";
    case FormGender::CommonForm: return "common";
  }
  return "?";
}

FormGender parse_form_gender(std::string_view s) {
  if (s == "m") return FormGender::MasculineOnly;
  if (s == "f") return FormGender::FeminineOnly;
  if (s == "neu") return FormGender::NeuterCase;
  if (s == "common") return FormGender::CommonForm;
  throw Error(ErrorCode::InvalidEntry, "gender must be m, f, neu or common, got '" + std::string(s) + "'");
}

GenderLabel label_for(FormGender g) {
  switch (g) {
    case FormGender::MasculineOnly: return GenderLabel::Masculine;
    case FormGender::FeminineOnly: return GenderLabel::Feminine;
    case FormGender::NeuterCase: return GenderLabel::N2_NeuterCase;
    case FormGender::CommonForm: return GenderLabel::N1_CommonForm;
  }
  return GenderLabel::Unmatched;
}

std::string_view to_string(PatternKind k) {
  switch (k) {
    case PatternKind::SlashSuffix: return "slash";
    case PatternKind::ParenSuffix: return "paren";
    case PatternKind::AtSign: return "at";
  }
  return "?";
}

PatternKind parse_pattern_kind(std::string_view s) {
  if (s == "slash") return PatternKind::SlashSuffix;
  if (s == "paren") return PatternKind::ParenSuffix;
  if (s == "at" || s == "atsign") return PatternKind::AtSign;
  throw Error(ErrorCode::InvalidEntry, "pattern kind must be slash, paren or at, got '" + std::string(s) + "'");
}

MorphPattern make_pattern(Language lang, PatternKind kind, std::string_view template_text) {
  std::string t = fold_case(template_text);
  if (kind == PatternKind::ParenSuffix && t.size() >= 2 && t.front() == '(' && t.back() == ')') {
    t = t.substr(1, t.size() - 2);
  }
  if (kind == PatternKind::AtSign && (t == "@" || t.empty())) t = "o/a";
  if (t.empty() || t.find_first_of("()@ ") != std::string::npos) {
    throw Error(ErrorCode::InvalidEntry, "bad " + std::string(to_string(kind)) + " pattern template '" +
                                             std::string(template_text) + "'");
  }
  MorphPattern p;
  p.language = lang;
  p.kind = kind;
  p.template_text = t;
  if (kind == PatternKind::ParenSuffix && t.find('/') == std::string::npos) {
    p.alternatives = {"", t};
  } else {
    p.alternatives = split(t, '/');
    if (p.alternatives.size() < 2 ||
        std::any_of(p.alternatives.begin(), p.alternatives.end(), [](const auto& a) { return a.empty(); })) {
      throw Error(ErrorCode::InvalidEntry, "pattern template '" + std::string(template_text) +
                                               "' needs at least two non-empty alternatives");
    }
  }
  return p;
}

std::vector<std::string> MorphPattern::candidates(std::string_view token) const {
  std::vector<std::string> suffixes;
  switch (kind) {
    case PatternKind::SlashSuffix: suffixes = {"(" + template_text + ")", template_text}; break;
    case PatternKind::ParenSuffix: suffixes = {"(" + template_text + ")"}; break;
    case PatternKind::AtSign: suffixes = {"@"}; break;
  }
  for (const auto& suffix : suffixes) {
    if (token.size() > suffix.size() && ends_with(token, suffix)) {
      std::string stem(token.substr(0, token.size() - suffix.size()));
      if (stem.find_first_of("/()@") != std::string::npos) return {};
      std::vector<std::string> out;
      for (const auto& alt : alternatives) out.push_back(stem + alt);
      return out;
    }
  }
  return {};
}

std::string MorphPattern::description() const {
  return std::string(to_string(kind)) + ":" + template_text;
}

Lexicon::Lexicon(Language lang, std::vector<LexiconEntry> entries, std::vector<AltPhraseEntry> alt_phrases,
                 std::vector<MorphPattern> patterns)
    : lang_(lang), patterns_(std::move(patterns)) {
  std::map<std::pair<std::string, std::string>, LexiconEntry> seen;
  for (auto& e : entries) {
    if (e.language != lang) {
      throw Error(ErrorCode::InvalidEntry, describe(e) + " belongs to '" + std::string(to_string(e.language)) +
                                               "', not '" + std::string(to_string(lang)) + "'");
    }
    if (e.english_lemma.empty() || e.surface_form.empty()) {
      throw Error(ErrorCode::InvalidEntry, describe(e) + " has an empty lemma or form");
    }
    if (normalize(e.surface_form).size() != 1) {
      throw Error(ErrorCode::InvalidEntry, describe(e) + " is not a single token; use an alt phrase");
    }
    if (e.form_gender == FormGender::NeuterCase && !has_neuter_case(lang)) {
      throw Error(ErrorCode::InvalidEntry,
                  describe(e) + ": '" + std::string(to_string(lang)) + "' has no grammatical neuter case");
    }
    std::string lemma = fold_case(e.english_lemma);
    std::string form = fold_case(e.surface_form);
    auto [it, inserted] = seen.emplace(std::make_pair(lemma, form), e);
    if (!inserted) {
      if (it->second.form_gender != e.form_gender) {
        throw Error(ErrorCode::LexiconConflict, "rows " + describe(it->second) + " and " + describe(e) +
                                                    " give one form contradictory genders");
      }
      continue;
    }
    by_lemma_[lemma].emplace(form, Form{e.surface_form, e.form_gender});
    by_form_[form].push_back(entries_.size());
    entries_.push_back(std::move(e));
  }

  std::set<std::pair<std::string, std::vector<std::string>>> seen_phrases;
  for (const auto& a : alt_phrases) {
    if (a.language != lang) {
      throw Error(ErrorCode::InvalidEntry, "alt phrase '" + a.phrase + "' belongs to another language");
    }
    auto toks = folded_tokens(a.phrase);
    if (a.english_lemma.empty() || toks.empty()) {
      throw Error(ErrorCode::InvalidEntry, "alt phrase for '" + a.english_lemma + "' has no tokens");
    }
    std::string lemma = fold_case(a.english_lemma);
    if (!seen_phrases.emplace(lemma, toks).second) continue;
    phrases_[lemma].emplace_back(a.phrase, std::move(toks));
  }
  for (const auto& p : patterns_) {
    if (p.language != lang) throw Error(ErrorCode::InvalidEntry, "pattern " + p.description() + " is for another language");
  }
}

std::size_t Lexicon::form_count() const {
  std::size_t n = 0;
  for (const auto& [lemma, forms] : by_lemma_) n += forms.size();
  return n;
}

const std::map<std::string, Lexicon::Form>* Lexicon::forms(std::string_view lemma) const {
  auto it = by_lemma_.find(fold_case(lemma));
  return it == by_lemma_.end() ? nullptr : &it->second;
}

std::vector<LexiconEntry> Lexicon::entries_for_form(std::string_view folded) const {
  std::vector<LexiconEntry> out;
  auto it = by_form_.find(folded);
  if (it == by_form_.end()) return out;
  for (auto i : it->second) out.push_back(entries_[i]);
  return out;
}

const std::vector<std::pair<std::string, std::vector<std::string>>>* Lexicon::alt_phrases(std::string_view lemma) const {
  auto it = phrases_.find(fold_case(lemma));
  return it == phrases_.end() ? nullptr : &it->second;
}

std::vector<LexiconEntry> parse_lexicon_csv(Language lang, std::string_view text, std::string_view source) {
  std::vector<LexiconEntry> out;
  for (const auto& row : csv::parse_with_header(text, {"lemma", "form", "gender"}, source)) {
    try {
      out.push_back({trim(row.fields[0]), lang, trim(row.fields[1]), parse_form_gender(trim(row.fields[2]))});
    } catch (const Error& e) {
      throw Error(e.code(), std::string(source) + ":" + std::to_string(row.line) + ": " + e.what());
    }
  }
  return out;
}

std::vector<AltPhraseEntry> parse_alt_phrase_csv(Language lang, std::string_view text, std::string_view source) {
  std::vector<AltPhraseEntry> out;
  for (const auto& row : csv::parse_with_header(text, {"lemma", "phrase"}, source)) {
    out.push_back({trim(row.fields[0]), lang, trim(row.fields[1])});
  }
  return out;
}

std::vector<MorphPattern> parse_pattern_csv(Language lang, std::string_view text, std::string_view source) {
  std::vector<MorphPattern> out;
  for (const auto& row : csv::parse_with_header(text, {"kind", "template"}, source)) {
    try {
      out.push_back(make_pattern(lang, parse_pattern_kind(trim(row.fields[0])), trim(row.fields[1])));
    } catch (const Error& e) {
      throw Error(e.code(), std::string(source) + ":" + std::to_string(row.line) + ": " + e.what());
    }
  }
  return out;
}

Lexicon load_lexicon(Language lang, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::IoError, "lexicon directory '" + dir.string() + "' does not exist");
  }
  std::string code(to_string(lang));
  fs::path lex = dir / ("lexicon_" + code + ".csv");
  if (!fs::exists(lex)) throw Error(ErrorCode::IoError, "missing lexicon file '" + lex.string() + "'");
  auto entries = parse_lexicon_csv(lang, csv::read_file(lex), lex.filename().string());

  std::vector<AltPhraseEntry> alts;
  if (fs::path p = dir / ("alt_" + code + ".csv"); fs::exists(p)) {
    alts = parse_alt_phrase_csv(lang, csv::read_file(p), p.filename().string());
  }
  std::vector<MorphPattern> patterns;
  if (fs::path p = dir / ("patterns_" + code + ".csv"); fs::exists(p)) {
    patterns = parse_pattern_csv(lang, csv::read_file(p), p.filename().string());
  }
  return Lexicon(lang, std::move(entries), std::move(alts), std::move(patterns));
}

}  // namespace gnt
