#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gnt {

struct Token {
  std::string text;    // NFC, original case, outer punctuation stripped
  std::string folded;  // case-folded `text`; diacritics kept
};

// NFC-composes the text, splits on Unicode whitespace and strips outer
// punctuation. The annotation characters / ( ) @ survive at the end of a
// token when they directly follow a letter, so "musculos(o/a)," keeps its
// parentheses. Tokens that are pure punctuation are dropped.
std::vector<Token> normalize(std::string_view utf8);

// NFC + full Unicode case folding of a whole string.
std::string fold_case(std::string_view utf8);

// Folded tokens of a phrase, for whole-token phrase matching.
std::vector<std::string> folded_tokens(std::string_view utf8);

bool is_annotation_char(char32_t c);

}  // namespace gnt
