#pragma once

#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gnt/lexicon.hpp"
#include "gnt/suite.hpp"
#include "gnt/text.hpp"

namespace gnt {

struct SlotScore {
  std::string instance_id;
  std::size_t slot_index = 0;
  GenderLabel label = GenderLabel::Unmatched;
  std::string matched_text;  // empty iff Unmatched
  std::string rule;          // which lexicon row, pattern, phrase or copy fired

  bool operator==(const SlotScore&) const = default;
};

// Rules are tried in this order; the first rule with an unconsumed match
// wins, and within a rule the earliest token position wins.
enum class MatchRule { LexiconForm = 0, Morphology = 1, AltPhrase = 2, SourceCopy = 3 };

// Classifies one slot against a normalized translation. Token positions in
// `consumed` are skipped; the positions of the winning match are added.
SlotScore classify_slot(const AdjectiveSlot& slot, std::span<const Token> translation, const Lexicon& lexicon,
                        std::set<std::size_t>& consumed, std::string_view instance_id = {});

// All slots of an instance in slot order, sharing one consumed set.
std::vector<SlotScore> classify_instance(const TestInstance& instance, std::string_view translation,
                                         const Lexicon& lexicon);

}  // namespace gnt
