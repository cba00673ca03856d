#include "gnt/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <stdexcept>

namespace gnt {

namespace {

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) throw std::runtime_error("ICU NFC normalizer unavailable");
  return *n;
}

icu::UnicodeString compose(std::string_view utf8) {
  icu::UnicodeString raw = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc().normalize(raw, status);
  if (U_FAILURE(status)) return raw;
  return out;
}

std::string to_utf8(const std::u32string& cps) {
  icu::UnicodeString s;
  for (char32_t c : cps) s.append(static_cast<UChar32>(c));
  std::string out;
  s.toUTF8String(out);
  return out;
}

std::string fold(const icu::UnicodeString& s) {
  icu::UnicodeString f(s);
  f.foldCase(U_FOLD_CASE_DEFAULT);
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString composed = nfc().normalize(f, status);
  std::string out;
  (U_FAILURE(status) ? f : composed).toUTF8String(out);
  return out;
}

bool keep_trailing(const std::u32string& tok, std::size_t i) {
  char32_t c = tok[i];
  if (!is_annotation_char(c) || c == U'(' || i == 0) return false;
  if (!u_isalpha(static_cast<UChar32>(tok[i - 1]))) return false;
  if (c == U')') return std::find(tok.begin(), tok.begin() + static_cast<std::ptrdiff_t>(i), U'(') != tok.begin() + static_cast<std::ptrdiff_t>(i);
  return true;
}

Token make_token(std::u32string tok) {
  std::size_t begin = 0;
  while (begin < tok.size() && u_ispunct(static_cast<UChar32>(tok[begin]))) ++begin;
  tok.erase(0, begin);
  while (!tok.empty() && u_ispunct(static_cast<UChar32>(tok.back())) && !keep_trailing(tok, tok.size() - 1)) {
    tok.pop_back();
  }
  Token t;
  t.text = to_utf8(tok);
  t.folded = fold(icu::UnicodeString::fromUTF8(t.text));
  return t;
}

}  // namespace

bool is_annotation_char(char32_t c) { return c == U'/' || c == U'(' || c == U')' || c == U'@'; }

std::vector<Token> normalize(std::string_view utf8) {
  icu::UnicodeString text = compose(utf8);
  std::vector<Token> out;
  std::u32string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    Token t = make_token(std::move(cur));
    cur.clear();
    if (!t.text.empty()) out.push_back(std::move(t));
  };
  for (int32_t i = 0; i < text.length(); i = text.moveIndex32(i, 1)) {
    UChar32 c = text.char32At(i);
    if (u_isUWhiteSpace(c)) {
      flush();
    } else {
      cur.push_back(static_cast<char32_t>(c));
    }
  }
  flush();
  return out;
}

std::string fold_case(std::string_view utf8) { return fold(compose(utf8)); }

std::vector<std::string> folded_tokens(std::string_view utf8) {
  std::vector<std::string> out;
  for (auto& t : normalize(utf8)) out.push_back(std::move(t.folded));
  return out;
}

}  // namespace gnt
