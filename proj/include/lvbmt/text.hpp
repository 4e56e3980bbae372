#ifndef LVBMT_TEXT_HPP
#define LVBMT_TEXT_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lvbmt {

// Minimal UTF-8 / Latin casing support. The languages handled here (Ladin
// Val Badia, Italian) live entirely in ASCII + Latin-1 Supplement +
// Latin Extended-A, so we carry our own tables instead of pulling in ICU.

using Codepoint = uint32_t;

// Decodes the codepoint starting at byte offset `i`; advances `i` past it.
// Malformed bytes decode as U+FFFD one byte at a time.
Codepoint decode_utf8(std::string_view s, size_t& i);
void encode_utf8(Codepoint cp, std::string& out);
std::vector<Codepoint> to_codepoints(std::string_view s);
std::string from_codepoints(const std::vector<Codepoint>& cps);
size_t codepoint_count(std::string_view s);

bool is_letter(Codepoint cp);
bool is_digit(Codepoint cp);
bool is_space(Codepoint cp);
bool is_upper(Codepoint cp);
bool is_apostrophe(Codepoint cp);  // ' and U+2019

Codepoint to_lower(Codepoint cp);
Codepoint to_upper(Codepoint cp);
std::string lowercase(std::string_view s);

// True when the first letter is uppercase (used for the case-restore policy).
bool starts_uppercase(std::string_view s);
// Uppercases the first codepoint, leaving the rest untouched.
std::string capitalize_first(std::string_view s);
// Lowercase + collapse whitespace runs to single spaces + trim.
std::string normalize_whitespace_lower(std::string_view s);

enum class TokenKind : uint8_t { Word, Number, Punct };

struct Token {
  std::string text;
  TokenKind kind = TokenKind::Word;
  std::string sep;  // separator BEFORE this token; concat(sep+text)+trailing == input
};

struct TokenStream {
  std::vector<Token> tokens;
  std::string trailing;  // separator after the last token

  std::string reassemble() const;
};

// Tokenizer rules: letter runs are words; an apostrophe directly after a
// letter attaches to that word, and a letter directly after the apostrophe
// starts a new token (elision: "l'identité" -> "l'" + "identité").
// Digit runs are Number tokens; everything else is per-codepoint Punct.
TokenStream tokenize(std::string_view text);

// Word texts only, in order (convenience used by metrics and tests).
std::vector<std::string> word_tokens(std::string_view text);

// Joins translated token texts: single spaces, except no space before
// closing punctuation, none after opening brackets, and none after a token
// ending in an apostrophe.
std::string detokenize(const std::vector<Token>& tokens);

}  // namespace lvbmt

#endif
