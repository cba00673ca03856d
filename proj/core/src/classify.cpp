#include "gnt/classify.hpp"

namespace gnt {

namespace {

bool free_span(const std::set<std::size_t>& consumed, std::size_t begin, std::size_t len) {
  for (std::size_t i = begin; i < begin + len; ++i) {
    if (consumed.count(i)) return false;
  }
  return true;
}

bool tokens_at(std::span<const Token> t, std::size_t pos, const std::vector<std::string>& phrase) {
  if (phrase.empty() || pos + phrase.size() > t.size()) return false;
  for (std::size_t j = 0; j < phrase.size(); ++j) {
    if (t[pos + j].folded != phrase[j]) return false;
  }
  return true;
}

std::string join_text(std::span<const Token> t, std::size_t pos, std::size_t len) {
  std::string out;
  for (std::size_t j = pos; j < pos + len; ++j) out += (out.empty() ? "" : " ") + t[j].text;
  return out;
}

SlotScore hit(const AdjectiveSlot& slot, std::string_view id, GenderLabel label, std::span<const Token> t,
              std::size_t pos, std::size_t len, std::string rule, std::set<std::size_t>& consumed) {
  for (std::size_t j = pos; j < pos + len; ++j) consumed.insert(j);
  return {std::string(id), slot.slot_index, label, join_text(t, pos, len), std::move(rule)};
}

}  // namespace

SlotScore classify_slot(const AdjectiveSlot& slot, std::span<const Token> t, const Lexicon& lexicon,
                        std::set<std::size_t>& consumed, std::string_view id) {
  const auto* forms = lexicon.forms(slot.english_lemma);

  if (forms) {
    for (std::size_t pos = 0; pos < t.size(); ++pos) {
      if (consumed.count(pos)) continue;
      auto it = forms->find(t[pos].folded);
      if (it == forms->end()) continue;
      return hit(slot, id, label_for(it->second.gender), t, pos, 1,
                 "lexicon:" + it->second.surface + ":" + std::string(to_string(it->second.gender)), consumed);
    }
    for (std::size_t pos = 0; pos < t.size(); ++pos) {
      if (consumed.count(pos)) continue;
      for (const auto& pattern : lexicon.patterns()) {
        for (const auto& candidate : pattern.candidates(t[pos].folded)) {
          if (forms->count(candidate)) {
            return hit(slot, id, GenderLabel::N5_AltMorphology, t, pos, 1, "pattern:" + pattern.description(),
                       consumed);
          }
        }
      }
    }
  }

  if (const auto* phrases = lexicon.alt_phrases(slot.english_lemma)) {
    for (std::size_t pos = 0; pos < t.size(); ++pos) {
      for (const auto& [phrase, toks] : *phrases) {
        if (tokens_at(t, pos, toks) && free_span(consumed, pos, toks.size())) {
          return hit(slot, id, GenderLabel::N3_AltPartOfSpeech, t, pos, toks.size(), "alt:" + phrase, consumed);
        }
      }
    }
  }

  auto lemma = folded_tokens(slot.english_lemma);
  for (std::size_t pos = 0; pos < t.size(); ++pos) {
    if (tokens_at(t, pos, lemma) && free_span(consumed, pos, lemma.size())) {
      return hit(slot, id, GenderLabel::N4_SourceCopy, t, pos, lemma.size(), "copy:" + slot.english_lemma, consumed);
    }
  }

  return {std::string(id), slot.slot_index, GenderLabel::Unmatched, "", "none"};
}

std::vector<SlotScore> classify_instance(const TestInstance& instance, std::string_view translation,
                                         const Lexicon& lexicon) {
  auto tokens = normalize(translation);
  std::set<std::size_t> consumed;
  std::vector<SlotScore> out;
  out.reserve(instance.slots.size());
  for (const auto& slot : instance.slots) {
    out.push_back(classify_slot(slot, tokens, lexicon, consumed, instance.id));
  }
  return out;
}

}  // namespace gnt
