#include "lvbmt/normalize.hpp"

#include <fstream>
#include <sstream>

#include "lvbmt/text.hpp"

namespace lvbmt {

namespace {

bool is_sentence_final(uint32_t cp) {
  return cp == '.' || cp == '!' || cp == '?' || cp == 0x2026;  // …
}

bool is_closing_trail(uint32_t cp) {
  switch (cp) {
    case '"':
    case '\'':
    case ')':
    case ']':
    case 0x00BB:  // »
    case 0x201D:  // ”
    case 0x2019:  // ’
      return true;
    default:
      return false;
  }
}

bool is_opening_quote(uint32_t cp) {
  switch (cp) {
    case '"':
    case '\'':
    case 0x00AB:  // «
    case 0x201C:  // “
    case 0x2018:  // ‘
      return true;
    default:
      return false;
  }
}

std::string utf8_slice(const std::vector<uint32_t>& cps, size_t b, size_t e) {
  std::vector<uint32_t> slice(cps.begin() + static_cast<long>(b),
                              cps.begin() + static_cast<long>(e));
  return from_codepoints(slice);
}

// The word (letters/digits/periods) ending at cps[end-1], as UTF-8.
std::string word_before(const std::vector<uint32_t>& cps, size_t end) {
  size_t begin = end;
  while (begin > 0 &&
         (is_letter(cps[begin - 1]) || is_digit(cps[begin - 1]) ||
          cps[begin - 1] == '.'))
    --begin;
  return utf8_slice(cps, begin, end);
}

}  // namespace

std::string Segmented::reassemble() const {
  std::string out = separators.empty() ? std::string() : separators[0];
  for (size_t i = 0; i < sentences.size(); ++i) {
    out += sentences[i];
    out += separators[i + 1];
  }
  return out;
}

Segmented segment_with_separators(const std::string& text,
                                  const SegmentOptions& opts) {
  Segmented out;
  auto cps = to_codepoints(text);

  // Leading whitespace is separator 0.
  size_t start = 0;
  while (start < cps.size() && is_space(cps[start])) ++start;
  out.separators.push_back(utf8_slice(cps, 0, start));
  if (start == cps.size()) return out;

  size_t sent_begin = start;
  size_t i = start;
  while (i < cps.size()) {
    if (!is_sentence_final(cps[i])) {
      ++i;
      continue;
    }
    size_t end = i + 1;  // candidate sentence end (exclusive)
    if (cps[i] == '.') {
      // Ordinal numbers ("3.") and listed abbreviations never split.
      if (i > sent_begin && is_digit(cps[i - 1])) {
        ++i;
        continue;
      }
      if (opts.abbreviations.count(word_before(cps, end))) {
        ++i;
        continue;
      }
    }
    while (end < cps.size() && is_closing_trail(cps[end])) ++end;
    // Boundary requires whitespace then a capital or opening quote, or
    // end of input.
    size_t ws_end = end;
    while (ws_end < cps.size() && is_space(cps[ws_end])) ++ws_end;
    bool boundary = false;
    if (ws_end == cps.size()) {
      boundary = true;
    } else if (ws_end > end &&
               (is_upper(cps[ws_end]) || is_opening_quote(cps[ws_end]) ||
                is_digit(cps[ws_end]))) {
      boundary = true;
    }
    if (!boundary) {
      i = end;
      continue;
    }
    out.sentences.push_back(utf8_slice(cps, sent_begin, end));
    out.separators.push_back(utf8_slice(cps, end, ws_end));
    sent_begin = ws_end;
    i = ws_end;
  }
  if (sent_begin < cps.size()) {
    // Trailing text without sentence-final punctuation is still a sentence.
    size_t tail_end = cps.size();
    while (tail_end > sent_begin && is_space(cps[tail_end - 1])) --tail_end;
    out.sentences.push_back(utf8_slice(cps, sent_begin, tail_end));
    out.separators.push_back(utf8_slice(cps, tail_end, cps.size()));
  }
  return out;
}

std::vector<std::string> segment(const std::string& text,
                                 const SegmentOptions& opts) {
  return segment_with_separators(text, opts).sentences;
}

// ---------------------------------------------------------------------------
// Respelling

std::vector<RespellRule> parse_respell_rules(std::istream& is,
                                             const std::string& name) {
  std::vector<RespellRule> rules;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string trimmed;
    {
      size_t b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos) continue;
      size_t e = line.find_last_not_of(" \t\r");
      trimmed = line.substr(b, e - b + 1);
    }
    if (trimmed.empty() || trimmed[0] == '#') continue;
    std::istringstream iss(trimmed);
    std::string scope, pattern, arrow, replacement;
    if (!(iss >> scope >> pattern >> arrow >> replacement) || arrow != "->")
      throw ParseError(name, lineno,
                       "expected '<scope> <pattern> -> <replacement>'");
    std::string extra;
    if (iss >> extra) throw ParseError(name, lineno, "trailing content '" + extra + "'");
    RespellRule r;
    if (scope == "token")
      r.scope = RespellRule::Scope::WholeToken;
    else if (scope == "suffix")
      r.scope = RespellRule::Scope::Suffix;
    else if (scope == "prefix")
      r.scope = RespellRule::Scope::Prefix;
    else
      throw ParseError(name, lineno, "unknown scope '" + scope + "'");
    if (pattern == replacement)
      throw ParseError(name, lineno, "identity rule '" + pattern + "'");
    r.pattern = pattern;
    r.replacement = replacement;
    rules.push_back(std::move(r));
  }
  return rules;
}

std::vector<RespellRule> parse_respell_rules_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open '" + path + "'");
  return parse_respell_rules(is, path);
}

std::string apply_respell(const RespellRule& rule, const std::string& token) {
  switch (rule.scope) {
    case RespellRule::Scope::WholeToken:
      if (token == rule.pattern) return rule.replacement;
      return "";
    case RespellRule::Scope::Suffix:
      if (token.size() >= rule.pattern.size() &&
          token.compare(token.size() - rule.pattern.size(),
                        rule.pattern.size(), rule.pattern) == 0)
        return token.substr(0, token.size() - rule.pattern.size()) +
               rule.replacement;
      return "";
    case RespellRule::Scope::Prefix:
      if (token.compare(0, rule.pattern.size(), rule.pattern) == 0)
        return rule.replacement + token.substr(rule.pattern.size());
      return "";
  }
  return "";
}

// ---------------------------------------------------------------------------
// Normalization

NormalizeOutcome normalize_sentence(const CompiledDictionary& dict,
                                    const std::vector<RespellRule>& rules,
                                    const std::string& sentence) {
  NormalizeOutcome out;
  TokenStream stream = tokenize(sentence);
  bool all_known = true;
  for (auto& tok : stream.tokens) {
    if (tok.kind != TokenKind::Word) continue;
    if (!dict.analyze(tok.text).empty()) continue;
    bool fixed = false;
    for (const auto& rule : rules) {
      std::string candidate = apply_respell(rule, tok.text);
      if (!candidate.empty() && !dict.analyze(candidate).empty()) {
        tok.text = candidate;
        ++out.respelled;
        fixed = true;
        break;
      }
    }
    if (!fixed) {
      all_known = false;
      out.unknown.push_back(tok.text);
    }
  }
  out.kept = all_known;
  if (all_known) out.sentence = stream.reassemble();
  return out;
}

FilterReport filter_corpus(const CompiledDictionary& dict,
                           const std::vector<RespellRule>& rules,
                           std::istream& in, std::ostream& out) {
  FilterReport r;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++r.total;
    auto outcome = normalize_sentence(dict, rules, line);
    r.respelled_tokens += outcome.respelled;
    if (outcome.kept) {
      ++r.kept;
      out << outcome.sentence << "\n";
    } else {
      ++r.dropped;
      ++r.dropped_histogram[outcome.unknown.size()];
    }
  }
  return r;
}

FilterReport filter_corpus(const CompiledDictionary& dict,
                           const std::vector<RespellRule>& rules,
                           const std::vector<std::string>& sentences,
                           std::vector<std::string>& kept_out) {
  FilterReport r;
  for (const auto& s : sentences) {
    ++r.total;
    auto outcome = normalize_sentence(dict, rules, s);
    r.respelled_tokens += outcome.respelled;
    if (outcome.kept) {
      ++r.kept;
      kept_out.push_back(outcome.sentence);
    } else {
      ++r.dropped;
      ++r.dropped_histogram[outcome.unknown.size()];
    }
  }
  return r;
}

void write_filter_report(std::ostream& os, const FilterReport& r) {
  os << "total\t" << r.total << "\n";
  os << "kept\t" << r.kept << "\n";
  os << "dropped\t" << r.dropped << "\n";
  os << "respelled_tokens\t" << r.respelled_tokens << "\n";
  for (const auto& [unknowns, count] : r.dropped_histogram)
    os << "dropped_with_unknowns\t" << unknowns << "\t" << count << "\n";
}

}  // namespace lvbmt
