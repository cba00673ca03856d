#pragma once

#include <set>
#include <string>
#include <vector>

#include "gnt/lexicon.hpp"
#include "gnt/suite.hpp"

namespace gnt::testing {

struct OracleResult {
  GenderLabel label = GenderLabel::Unmatched;
  std::string matched_text;
};

// Brute force: list every (rule, position, row) match for the slot, drop the
// ones touching consumed tokens, take the smallest by (rule, position, row).
OracleResult oracle_classify(const std::string& lemma, const std::vector<std::string>& raw_tokens,
                             const std::vector<LexiconEntry>& entries, const std::vector<AltPhraseEntry>& phrases,
                             const std::vector<MorphPattern>& patterns, std::set<std::size_t>& consumed);

std::vector<OracleResult> oracle_instance(const std::vector<std::string>& lemmas, const std::string& translation,
                                          const std::vector<LexiconEntry>& entries,
                                          const std::vector<AltPhraseEntry>& phrases,
                                          const std::vector<MorphPattern>& patterns);

}  // namespace gnt::testing
