#include "gnt/language.hpp"

#include <algorithm>
#include <cctype>

#include "gnt/error.hpp"

namespace gnt {

Language parse_language(std::string_view code) {
  std::string lower(code);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "is") return Language::IS;
  if (lower == "cs") return Language::CS;
  if (lower == "es") return Language::ES;
  throw Error(ErrorCode::InvalidLanguage, "unsupported language '" + std::string(code) + "' (expected is, cs or es)");
}

std::string_view to_string(Language lang) {
  switch (lang) {
    case Language::IS: return "is";
    case Language::CS: return "cs";
    case Language::ES: return "es";
  }
  return "?";
}

}  // namespace gnt
