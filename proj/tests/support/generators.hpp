#pragma once

#include <random>
#include <string>
#include <vector>

#include "gnt/lexicon.hpp"
#include "gnt/suite.hpp"

namespace gnt::testing {

// Random manifest whose quotas respect the pairing ratios; roughly one in
// four quotas is not a whole number of balanced cycles.
SuiteManifest random_manifest(std::mt19937_64& rng);

// A small random lexicon over a tiny alphabet, so translations built from
// the same pool collide with forms, phrases and patterns often.
struct RandomCase {
  std::vector<LexiconEntry> entries;
  std::vector<AltPhraseEntry> phrases;
  std::vector<MorphPattern> patterns;
  std::vector<std::string> lemmas;  // slot lemmas, in slot order
  std::string translation;
};

RandomCase random_classifier_case(std::mt19937_64& rng);

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi);  // inclusive

}  // namespace gnt::testing
