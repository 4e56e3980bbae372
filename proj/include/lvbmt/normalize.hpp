#ifndef LVBMT_NORMALIZE_HPP
#define LVBMT_NORMALIZE_HPP

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lvbmt/dictionary.hpp"

namespace lvbmt {

// Sentence segmentation --------------------------------------------------

struct SegmentOptions {
  // Words (with trailing dot) that never end a sentence.
  std::set<std::string> abbreviations = {"Dr.", "Sig.", "Sra.", "Prof.",
                                         "N.", "pag.", "art.", "n."};
};

// sentences[i] sits between separators[i] and separators[i+1];
// concatenating separators[0] s[0] separators[1] s[1] ... reproduces the
// input byte-for-byte.
struct Segmented {
  std::vector<std::string> sentences;
  std::vector<std::string> separators;  // size = sentences.size() + 1
  std::string reassemble() const;
};

Segmented segment_with_separators(const std::string& text,
                                  const SegmentOptions& opts = {});
std::vector<std::string> segment(const std::string& text,
                                 const SegmentOptions& opts = {});

// Respelling -------------------------------------------------------------

struct RespellRule {
  enum class Scope { WholeToken, Suffix, Prefix };
  Scope scope = Scope::WholeToken;
  std::string pattern;
  std::string replacement;
};

// Line format: `<token|suffix|prefix> <pattern> -> <replacement>`.
// Identity rules (pattern == replacement) are rejected.
std::vector<RespellRule> parse_respell_rules(std::istream& is,
                                             const std::string& name);
std::vector<RespellRule> parse_respell_rules_file(const std::string& path);

// Respelled token, or "" when the rule does not apply.
std::string apply_respell(const RespellRule& rule, const std::string& token);

// Normalization ----------------------------------------------------------

struct NormalizeOutcome {
  bool kept = false;
  std::string sentence;                // normalized text when kept
  std::vector<std::string> unknown;    // unresolved tokens when dropped
  size_t respelled = 0;                // tokens rewritten by a rule
};

// For each analyzer-unknown word token, rules are tried in order and the
// first one producing a known token is applied; the sentence is kept iff
// every word token ends up known.
NormalizeOutcome normalize_sentence(const CompiledDictionary& dict,
                                    const std::vector<RespellRule>& rules,
                                    const std::string& sentence);

struct FilterReport {
  size_t total = 0;
  size_t kept = 0;
  size_t dropped = 0;
  size_t respelled_tokens = 0;
  // unknown tokens per dropped sentence -> number of such sentences
  std::map<size_t, size_t> dropped_histogram;
};

// Streaming line-per-sentence filter; kept sentences are written to `out`.
FilterReport filter_corpus(const CompiledDictionary& dict,
                           const std::vector<RespellRule>& rules,
                           std::istream& in, std::ostream& out);

FilterReport filter_corpus(const CompiledDictionary& dict,
                           const std::vector<RespellRule>& rules,
                           const std::vector<std::string>& sentences,
                           std::vector<std::string>& kept_out);

void write_filter_report(std::ostream& os, const FilterReport& r);

}  // namespace lvbmt

#endif
