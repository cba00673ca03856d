#include <gtest/gtest.h>

#include "gnt/text.hpp"

using namespace gnt;

namespace {

std::vector<std::string> texts(std::string_view s) {
  std::vector<std::string> out;
  for (const auto& t : normalize(s)) out.push_back(t.text);
  return out;
}

}  // namespace

TEST(Normalize, KeepsAnnotationAfterLetters) {
  EXPECT_EQ(texts("\"musculos(o/a),\" dijo."), (std::vector<std::string>{"musculos(o/a)", "dijo"}));
  EXPECT_EQ(texts("Ég er huglítil(l)."), (std::vector<std::string>{"Ég", "er", "huglítil(l)"}));
  EXPECT_EQ(texts("Soy musculos@!"), (std::vector<std::string>{"Soy", "musculos@"}));
  EXPECT_EQ(texts("nesmysln(ý/á)"), (std::vector<std::string>{"nesmysln(ý/á)"}));
}

TEST(Normalize, EmptyAndPunctuationOnly) {
  EXPECT_TRUE(normalize("").empty());
  EXPECT_TRUE(normalize("  \t\n ").empty());
  EXPECT_TRUE(normalize("\" , . !").empty());
}

TEST(Normalize, StripsOuterPunctuation) {
  EXPECT_EQ(texts("(aside) «fuerte», ¡sí!"), (std::vector<std::string>{"aside", "fuerte", "sí"}));
  EXPECT_EQ(texts("word/"), (std::vector<std::string>{"word/"}));
  EXPECT_EQ(texts("word)"), (std::vector<std::string>{"word"}));
}

TEST(Normalize, ComposesToNfc) {
  // "a" + combining acute -> "á"
  auto toks = normalize("varka\xCC\x81rt");
  ASSERT_EQ(toks.size(), 1u);
  EXPECT_EQ(toks[0].text, "varkárt");
}

TEST(Normalize, FoldsCaseButKeepsDiacritics) {
  auto toks = normalize("FUERTE Varkár");
  ASSERT_EQ(toks.size(), 2u);
  EXPECT_EQ(toks[0].folded, "fuerte");
  EXPECT_EQ(toks[0].text, "FUERTE");
  EXPECT_EQ(toks[1].folded, "varkár");
  EXPECT_NE(fold_case("varkar"), fold_case("varkár"));
}

TEST(Normalize, SplitsOnUnicodeWhitespace) {
  EXPECT_EQ(texts("en\xC2\xA0" "forma"), (std::vector<std::string>{"en", "forma"}));
}
