#include <gtest/gtest.h>

#include <filesystem>

#include "gnt/error.hpp"
#include "gnt/lexicon.hpp"

using namespace gnt;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::StageError;
}

}  // namespace

TEST(Lexicon, SingleCommonForm) {
  Lexicon lex(Language::ES, {{"fit", Language::ES, "fuerte", FormGender::CommonForm}});
  EXPECT_EQ(lex.lemma_count(), 1u);
  EXPECT_EQ(lex.form_count(), 1u);
  ASSERT_NE(lex.forms("FIT"), nullptr);
  EXPECT_EQ(lex.forms("fit")->at("fuerte").gender, FormGender::CommonForm);
}

TEST(Lexicon, CzechNeuterIsValid) {
  Lexicon lex(Language::CS, {{"nonsensical", Language::CS, "nesmyslné", FormGender::NeuterCase}});
  EXPECT_EQ(lex.entries_for_form("nesmyslné").size(), 1u);
}

TEST(Lexicon, SpanishNeuterIsInvalid) {
  EXPECT_EQ(code_of([] { Lexicon(Language::ES, {{"fit", Language::ES, "musculoso", FormGender::NeuterCase}}); }),
            ErrorCode::InvalidEntry);
}

TEST(Lexicon, ContradictoryRowsConflict) {
  EXPECT_EQ(code_of([] {
              Lexicon(Language::ES, {{"fit", Language::ES, "fuerte", FormGender::CommonForm},
                                     {"fit", Language::ES, "Fuerte", FormGender::MasculineOnly}});
            }),
            ErrorCode::LexiconConflict);
}

TEST(Lexicon, IdenticalRowsAreMerged) {
  Lexicon lex(Language::ES, {{"fit", Language::ES, "fuerte", FormGender::CommonForm},
                             {"fit", Language::ES, "fuerte", FormGender::CommonForm}});
  EXPECT_EQ(lex.entries().size(), 1u);
}

TEST(Lexicon, SameFormDifferentLemmasIsFine) {
  Lexicon lex(Language::ES, {{"ready", Language::ES, "listo", FormGender::MasculineOnly},
                             {"smart", Language::ES, "listo", FormGender::MasculineOnly}});
  EXPECT_EQ(lex.entries_for_form("listo").size(), 2u);
}

TEST(Lexicon, RejectsMultiTokenFormsAndWrongLanguage) {
  EXPECT_EQ(code_of([] { Lexicon(Language::ES, {{"fit", Language::ES, "en forma", FormGender::CommonForm}}); }),
            ErrorCode::InvalidEntry);
  EXPECT_EQ(code_of([] { Lexicon(Language::ES, {{"fit", Language::CS, "zdatný", FormGender::MasculineOnly}}); }),
            ErrorCode::InvalidEntry);
}

TEST(Lexicon, CsvParsing) {
  auto rows = parse_lexicon_csv(Language::IS, "lemma,form,gender\ncautious,varkár,common\ncautious,\"varkárt\",neu\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].form_gender, FormGender::NeuterCase);
  EXPECT_EQ(code_of([] { parse_lexicon_csv(Language::IS, "lemma,form,gender\ncautious,varkár,x\n"); }),
            ErrorCode::InvalidEntry);
  EXPECT_EQ(code_of([] { parse_lexicon_csv(Language::IS, "lemma,form\ncautious,varkár\n"); }), ErrorCode::ParseError);
}

TEST(Lexicon, LoadsDemoData) {
  for (auto lang : {Language::IS, Language::CS, Language::ES}) {
    auto lex = load_lexicon(lang, std::filesystem::path(GNT_TEST_DATA_DIR) / "demo" / "lexicon");
    EXPECT_GE(lex.lemma_count(), 10u) << to_string(lang);
    EXPECT_FALSE(lex.patterns().empty());
  }
}

TEST(Lexicon, MissingDirectory) {
  EXPECT_EQ(code_of([] { load_lexicon(Language::ES, "/nonexistent/lexicon"); }), ErrorCode::IoError);
}

TEST(MorphPattern, Candidates) {
  auto slash = make_pattern(Language::ES, PatternKind::SlashSuffix, "o/a");
  EXPECT_EQ(slash.candidates("musculos(o/a)"), (std::vector<std::string>{"musculoso", "musculosa"}));
  EXPECT_EQ(slash.candidates("musculoso/a"), (std::vector<std::string>{"musculoso", "musculosa"}));
  EXPECT_TRUE(slash.candidates("musculoso").empty());
  EXPECT_TRUE(slash.candidates("(o/a)").empty());

  auto paren = make_pattern(Language::IS, PatternKind::ParenSuffix, "(l)");
  EXPECT_EQ(paren.candidates("huglítil(l)"), (std::vector<std::string>{"huglítil", "huglítill"}));

  auto at = make_pattern(Language::ES, PatternKind::AtSign, "@");
  EXPECT_EQ(at.candidates("musculos@"), (std::vector<std::string>{"musculoso", "musculosa"}));
}

TEST(MorphPattern, RejectsBadTemplates) {
  EXPECT_EQ(code_of([] { make_pattern(Language::ES, PatternKind::SlashSuffix, "o"); }), ErrorCode::InvalidEntry);
  EXPECT_EQ(code_of([] { make_pattern(Language::ES, PatternKind::SlashSuffix, ""); }), ErrorCode::InvalidEntry);
}

TEST(GenderLabel, RoundTripsNames) {
  for (auto l : kAllLabels) EXPECT_EQ(parse_label(to_string(l)), l);
}
