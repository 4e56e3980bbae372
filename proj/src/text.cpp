#include "lvbmt/text.hpp"

namespace lvbmt {

Codepoint decode_utf8(std::string_view s, size_t& i) {
  const auto b = [&](size_t k) { return static_cast<unsigned char>(s[k]); };
  unsigned char c = b(i);
  if (c < 0x80) {
    ++i;
    return c;
  }
  auto cont = [&](size_t k) { return k < s.size() && (b(k) & 0xC0) == 0x80; };
  if ((c & 0xE0) == 0xC0 && cont(i + 1)) {
    Codepoint cp = (Codepoint(c & 0x1F) << 6) | (b(i + 1) & 0x3F);
    i += 2;
    return cp;
  }
  if ((c & 0xF0) == 0xE0 && cont(i + 1) && cont(i + 2)) {
    Codepoint cp = (Codepoint(c & 0x0F) << 12) | (Codepoint(b(i + 1) & 0x3F) << 6) |
                   (b(i + 2) & 0x3F);
    i += 3;
    return cp;
  }
  if ((c & 0xF8) == 0xF0 && cont(i + 1) && cont(i + 2) && cont(i + 3)) {
    Codepoint cp = (Codepoint(c & 0x07) << 18) | (Codepoint(b(i + 1) & 0x3F) << 12) |
                   (Codepoint(b(i + 2) & 0x3F) << 6) | (b(i + 3) & 0x3F);
    i += 4;
    return cp;
  }
  ++i;
  return 0xFFFD;
}

void encode_utf8(Codepoint cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::vector<Codepoint> to_codepoints(std::string_view s) {
  std::vector<Codepoint> cps;
  cps.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) cps.push_back(decode_utf8(s, i));
  return cps;
}

std::string from_codepoints(const std::vector<Codepoint>& cps) {
  std::string out;
  out.reserve(cps.size());
  for (Codepoint cp : cps) encode_utf8(cp, out);
  return out;
}

size_t codepoint_count(std::string_view s) {
  size_t i = 0, n = 0;
  while (i < s.size()) {
    decode_utf8(s, i);
    ++n;
  }
  return n;
}

bool is_letter(Codepoint cp) {
  if ((cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z')) return true;
  if (cp >= 0xC0 && cp <= 0xFF && cp != 0xD7 && cp != 0xF7) return true;  // Latin-1
  if (cp >= 0x100 && cp <= 0x17F) return true;                           // Latin Ext-A
  return false;
}

bool is_digit(Codepoint cp) { return cp >= '0' && cp <= '9'; }

bool is_space(Codepoint cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == 0xA0;
}

bool is_apostrophe(Codepoint cp) { return cp == '\'' || cp == 0x2019; }

bool is_upper(Codepoint cp) {
  if (cp >= 'A' && cp <= 'Z') return true;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return true;
  if (cp == 0x178) return true;  // Y with diaeresis
  if (cp >= 0x100 && cp <= 0x137) return (cp & 1) == 0;
  if (cp >= 0x139 && cp <= 0x148) return (cp & 1) == 1;
  if (cp >= 0x14A && cp <= 0x177) return (cp & 1) == 0;
  if (cp >= 0x179 && cp <= 0x17E) return (cp & 1) == 1;
  return false;
}

Codepoint to_lower(Codepoint cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  if (cp == 0x178) return 0xFF;
  if (is_upper(cp) && cp >= 0x100 && cp <= 0x17E) return cp + 1;
  return cp;
}

Codepoint to_upper(Codepoint cp) {
  if (cp >= 'a' && cp <= 'z') return cp - 0x20;
  if (cp >= 0xE0 && cp <= 0xFE && cp != 0xF7) return cp - 0x20;
  if (cp == 0xFF) return 0x178;
  if (cp >= 0x101 && cp <= 0x17E && !is_upper(cp) && is_upper(cp - 1)) return cp - 1;
  return cp;
}

std::string lowercase(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) encode_utf8(to_lower(decode_utf8(s, i)), out);
  return out;
}

bool starts_uppercase(std::string_view s) {
  if (s.empty()) return false;
  size_t i = 0;
  return is_upper(decode_utf8(s, i));
}

std::string capitalize_first(std::string_view s) {
  if (s.empty()) return std::string(s);
  size_t i = 0;
  Codepoint first = decode_utf8(s, i);
  std::string out;
  encode_utf8(to_upper(first), out);
  out.append(s.substr(i));
  return out;
}

std::string normalize_whitespace_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  size_t i = 0;
  bool pending_space = false, started = false;
  while (i < s.size()) {
    Codepoint cp = decode_utf8(s, i);
    if (is_space(cp)) {
      pending_space = started;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    started = true;
    encode_utf8(to_lower(cp), out);
  }
  return out;
}

std::string TokenStream::reassemble() const {
  std::string out;
  for (const Token& t : tokens) {
    out += t.sep;
    out += t.text;
  }
  out += trailing;
  return out;
}

TokenStream tokenize(std::string_view text) {
  TokenStream ts;
  std::string sep;
  size_t i = 0;
  while (i < text.size()) {
    size_t start = i;
    Codepoint cp = decode_utf8(text, i);
    if (is_space(cp)) {
      sep.append(text.substr(start, i - start));
      continue;
    }
    Token tok;
    tok.sep = std::move(sep);
    sep.clear();
    if (is_letter(cp)) {
      size_t end = i;
      while (end < text.size()) {
        size_t next = end;
        Codepoint c2 = decode_utf8(text, next);
        if (is_letter(c2)) {
          end = next;
        } else if (is_apostrophe(c2)) {
          // apostrophe binds to the word on its left; the run ends after it
          end = next;
          break;
        } else {
          break;
        }
      }
      tok.text.assign(text.substr(start, end - start));
      tok.kind = TokenKind::Word;
      i = end;
    } else if (is_digit(cp)) {
      size_t end = i;
      while (end < text.size()) {
        size_t next = end;
        if (!is_digit(decode_utf8(text, next))) break;
        end = next;
      }
      tok.text.assign(text.substr(start, end - start));
      tok.kind = TokenKind::Number;
    i = end;
    } else {
      tok.text.assign(text.substr(start, i - start));
      tok.kind = TokenKind::Punct;
    }
    ts.tokens.push_back(std::move(tok));
  }
  ts.trailing = std::move(sep);
  return ts;
}

std::vector<std::string> word_tokens(std::string_view text) {
  std::vector<std::string> words;
  for (const Token& t : tokenize(text).tokens)
    if (t.kind == TokenKind::Word) words.push_back(t.text);
  return words;
}

namespace {

bool is_closing_punct(const std::string& t) {
  static const char* kClosing[] = {".", ",", ";", ":", "!", "?", ")", "]",
                                   "}", "…", "»", "”", "’"};
  for (const char* c : kClosing)
    if (t == c) return true;
  return false;
}

bool is_opening_punct(const std::string& t) {
  static const char* kOpening[] = {"(", "[", "{", "«", "“", "¿"};
  for (const char* c : kOpening)
    if (t == c) return true;
  return false;
}

bool ends_with_apostrophe(const std::string& t) {
  if (t.empty()) return false;
  if (t.back() == '\'') return true;
  return t.size() >= 3 && t.compare(t.size() - 3, 3, "’") == 0;
}

}  // namespace

std::string detokenize(const std::vector<Token>& tokens) {
  std::string out;
  bool suppress_space = true;  // no leading space
  for (const Token& t : tokens) {
    if (t.text.empty()) continue;
    if (!suppress_space && !is_closing_punct(t.text)) out.push_back(' ');
    out += t.text;
    suppress_space = is_opening_punct(t.text) || ends_with_apostrophe(t.text);
  }
  return out;
}

}  // namespace lvbmt
