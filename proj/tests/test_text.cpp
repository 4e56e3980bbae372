#include <doctest.h>

#include <random>

#include "lvbmt/text.hpp"

using namespace lvbmt;

TEST_CASE("utf8 codepoints round-trip") {
  std::string s = "chësc ćiasa müt sorëdl é perché";
  auto cps = to_codepoints(s);
  CHECK(from_codepoints(cps) == s);
  CHECK(codepoint_count("ćiasa") == 5);
  CHECK(codepoint_count("casa") == 4);
}

TEST_CASE("malformed utf8 decodes as replacement characters") {
  std::string s = "a\xC3";  // truncated two-byte sequence
  size_t i = 0;
  CHECK(decode_utf8(s, i) == 'a');
  CHECK(decode_utf8(s, i) == 0xFFFD);
  CHECK(i == s.size());
}

TEST_CASE("latin casing tables") {
  CHECK(lowercase("ĆIASA") == "ćiasa");
  CHECK(lowercase("CHËSC") == "chësc");
  CHECK(capitalize_first("ćiasa") == "Ćiasa");
  CHECK(capitalize_first("ëra") == "Ëra");
  CHECK(starts_uppercase("Ćiasa"));
  CHECK_FALSE(starts_uppercase("ćiasa"));
  CHECK(to_lower(to_upper(U'ü')) == U'ü');
}

TEST_CASE("normalize_whitespace_lower collapses runs and trims") {
  CHECK(normalize_whitespace_lower("  La   Müta\tcianta \n") == "la müta cianta");
  CHECK(normalize_whitespace_lower("") == "");
}

TEST_CASE("tokenize splits letter runs and punctuation") {
  auto ws = word_tokens("chësc liber é to");
  REQUIRE(ws.size() == 4);
  CHECK(ws[0] == "chësc");
  CHECK(ws[1] == "liber");
  CHECK(ws[2] == "é");
  CHECK(ws[3] == "to");

  auto stream = tokenize("Olá, co vara pa?");
  REQUIRE(stream.tokens.size() == 6);
  CHECK(stream.tokens[0].text == "Olá");
  CHECK(stream.tokens[1].text == ",");
  CHECK(stream.tokens[1].kind == TokenKind::Punct);
  CHECK(stream.tokens[5].text == "?");
}

TEST_CASE("tokenize of empty input yields no tokens") {
  auto stream = tokenize("");
  CHECK(stream.tokens.empty());
  CHECK(stream.reassemble() == "");
}

TEST_CASE("elision splits after the apostrophe") {
  auto ws = word_tokens("l'identité ladina");
  REQUIRE(ws.size() == 3);
  CHECK(ws[0] == "l'");
  CHECK(ws[1] == "identité");
  CHECK(ws[2] == "ladina");
}

TEST_CASE("trailing apostrophe stays on its word") {
  auto ws = word_tokens("val' po");
  REQUIRE(ws.size() == 2);
  CHECK(ws[0] == "val'");
}

TEST_CASE("numbers tokenize separately from words") {
  auto stream = tokenize("ai 3 dis");
  REQUIRE(stream.tokens.size() == 3);
  CHECK(stream.tokens[1].text == "3");
  CHECK(stream.tokens[1].kind == TokenKind::Number);
}

TEST_CASE("tokenize round-trips arbitrary text byte-for-byte") {
  const char* samples[] = {
      "Chësc liber é to.",
      "  doppi   spazi\te tab ",
      "l'identité, \"citazione\"!  (parentesi) 12.5%",
      "Sorëdl…\n\nnüa lingia",
      "",
  };
  for (const auto* s : samples) {
    auto stream = tokenize(s);
    CHECK(stream.reassemble() == s);
  }

  // Randomized byte-level property over a mixed alphabet.
  std::mt19937_64 rng(11);
  const std::string alphabet = "ab ëü'.,?!\"-3 ()";
  for (int it = 0; it < 200; ++it) {
    std::string s;
    size_t len = rng() % 40;
    for (size_t i = 0; i < len; ++i) {
      // Pick a codepoint-aligned slice start.
      size_t p = rng() % alphabet.size();
      while (p > 0 && (alphabet[p] & 0xC0) == 0x80) --p;
      size_t q = p + 1;
      while (q < alphabet.size() && (alphabet[q] & 0xC0) == 0x80) ++q;
      s += alphabet.substr(p, q - p);
    }
    auto stream = tokenize(s);
    CHECK(stream.reassemble() == s);
  }
}

TEST_CASE("detokenize spacing conventions") {
  auto toks = [](std::initializer_list<const char*> texts) {
    std::vector<Token> out;
    for (const auto* t : texts) out.push_back(Token{t, TokenKind::Word, ""});
    return out;
  };
  CHECK(detokenize(toks({"questo", "libro", "è", "tuo", "."})) ==
        "questo libro è tuo.");
  CHECK(detokenize(toks({"dove", "è", "?", "sì", ","})) == "dove è? sì,");
  CHECK(detokenize(toks({"l'", "identité"})) == "l'identité");
  CHECK(detokenize(toks({"(", "ecco", ")"})) == "(ecco)");
  CHECK(detokenize({}) == "");
}
