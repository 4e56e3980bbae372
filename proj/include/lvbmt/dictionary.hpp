#ifndef LVBMT_DICTIONARY_HPP
#define LVBMT_DICTIONARY_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lvbmt/tags.hpp"

namespace lvbmt {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Parse/compile failure carrying the source location.
class ParseError : public Error {
 public:
  ParseError(const std::string& file, int line, const std::string& msg);
  const std::string& file() const { return file_; }
  int line() const { return line_; }

 private:
  std::string file_;
  int line_;
};

struct ParadigmForm {
  std::string suffix;  // "" allowed (written "-" in files)
  TagList tags;
};

struct Paradigm {
  std::string id;
  Category category;
  std::vector<ParadigmForm> forms;
};

struct LemmaEntry {
  std::string lemma;
  std::string stem;  // "" written "-" in files
  std::string paradigm_id;
  bool multiword = false;  // lemma contains the word joiner '_'
};

struct TagRewrite {
  Attribute attribute;
  Tag value;
};

struct BilingualEntry {
  std::string src_lemma;
  Category src_category;
  std::string tgt_lemma;
  Category tgt_category;
  std::vector<TagRewrite> tag_overrides;
  uint32_t rank = 0;  // line order in the source file; lower wins
};

struct Analysis {
  std::string lemma;
  Category category;
  TagList tags;

  bool operator==(const Analysis& o) const {
    return lemma == o.lemma && category == o.category && tags == o.tags;
  }
};

struct GeneratorEntry {
  TagList tags;
  std::string surface;
};

struct CompileReport {
  size_t paradigms = 0;
  size_t lemmas = 0;
  size_t forms = 0;  // analyzer entries added (lemmas x paradigm forms)
  size_t bilingual_entries = 0;
  std::vector<std::string> warnings;
};

struct CoverageReport {
  size_t tokens = 0;  // alphabetic tokens only
  size_t known = 0;
  double fraction = 0.0;
  std::vector<std::pair<std::string, size_t>> unknown_types;  // by count desc
};

// Longest-match index over multiword surface forms ("a_b" matches the token
// sequence ["a","b"]).
class MultiwordTrie {
 public:
  void insert(const std::vector<std::string>& words);
  // Longest match starting at `pos`; 0 when none (single words never match).
  size_t longest_match(const std::vector<std::string>& words, size_t pos) const;
  bool empty() const { return nodes_.empty(); }

 private:
  struct Node {
    std::map<std::string, size_t> next;
    bool terminal = false;
  };
  std::vector<Node> nodes_;  // nodes_[0] = root when non-empty
};

// Immutable analyzer + generator + bilingual lexicon for one translation
// direction. Lemma/paradigm tables hold entries of both languages of the
// pair; the bilingual table fixes which one is source.
class CompiledDictionary {
 public:
  const std::string& src_lang() const { return src_lang_; }
  const std::string& tgt_lang() const { return tgt_lang_; }
  const CompileReport& report() const { return report_; }

  // Exact lookup, then lowercase fallback; source-file order; [] if unknown.
  const std::vector<Analysis>& analyze(const std::string& token) const;

  // First generator entry whose tags are a superset of `tags`;
  // "#"+lemma when nothing matches.
  std::string generate(const std::string& lemma, Category category,
                       const TagList& tags) const;

  // Bilingual candidates for (lemma, category), rank order.
  const std::vector<BilingualEntry>& bilingual(const std::string& lemma,
                                               Category category) const;

  const MultiwordTrie& multiwords() const { return multiword_trie_; }

  // Canonical re-emittable text dump; byte-identical for identical inputs.
  void dump(std::ostream& os) const;
  void save(const std::string& path) const;

  // Every (surface, analysis) pair in insertion order, for audits and the
  // analyzer/generator round-trip check.
  void for_each_analysis(
      const std::function<void(const std::string& surface, const Analysis&)>& fn)
      const;

  size_t analyzer_size() const { return analyzer_.size(); }

  friend class DictionaryCompiler;

 private:
  std::string src_lang_ = "lvb";
  std::string tgt_lang_ = "ita";
  CompileReport report_;

  std::map<std::string, std::vector<Analysis>> analyzer_;
  std::map<std::pair<std::string, Category>, std::vector<GeneratorEntry>> generator_;
  std::map<std::pair<std::string, Category>, std::vector<BilingualEntry>> bilingual_;
  MultiwordTrie multiword_trie_;
  std::vector<std::string> analyzer_order_;  // surfaces in first-insertion order

  std::vector<Paradigm> paradigms_;  // source order, kept for dump()
  std::vector<LemmaEntry> lemma_entries_;
  std::vector<BilingualEntry> bilingual_entries_;
};

using DictionaryPtr = std::shared_ptr<const CompiledDictionary>;

// compile() from the three line-oriented source files (formats in
// doc/formats.md). Throws ParseError / Error on the documented failures.
DictionaryPtr compile_dictionary(const std::string& paradigm_file,
                                 const std::string& lemma_file,
                                 const std::string& bilingual_file,
                                 const std::string& src_lang = "lvb",
                                 const std::string& tgt_lang = "ita");

// Loads a canonical dump produced by CompiledDictionary::save().
DictionaryPtr load_dictionary(const std::string& path);

// In-memory compile used by tests and the normalizer fixtures.
DictionaryPtr compile_dictionary_text(const std::string& paradigm_text,
                                      const std::string& lemma_text,
                                      const std::string& bilingual_text,
                                      const std::string& src_lang = "lvb",
                                      const std::string& tgt_lang = "ita");

// Coverage of an analyzable-token stream; sentences are tokenized with
// tokenize(), multiword entries count via longest match, numbers and
// punctuation stay out of the denominator. Throws Error("empty corpus")
// when no alphabetic token is seen.
CoverageReport coverage(const CompiledDictionary& dict,
                        const std::vector<std::string>& sentences);

}  // namespace lvbmt

#endif
