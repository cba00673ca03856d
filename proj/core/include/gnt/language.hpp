#pragma once

#include <string>
#include <string_view>

namespace gnt {

// Target languages with grammatical gender that the harness scores.
enum class Language { IS, CS, ES };

// Accepts "is", "cs", "es" in any case; throws InvalidLanguage otherwise.
Language parse_language(std::string_view code);
std::string_view to_string(Language lang);

// Icelandic and Czech have a neuter case; Spanish does not.
constexpr bool has_neuter_case(Language lang) { return lang != Language::ES; }

}  // namespace gnt
