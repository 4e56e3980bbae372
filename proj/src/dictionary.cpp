#include "lvbmt/dictionary.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "lvbmt/text.hpp"

namespace lvbmt {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream iss(line);
  std::string w;
  while (iss >> w) out.push_back(w);
  return out;
}

std::vector<std::string> split_char(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

bool is_comment_or_blank(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::string dash_to_empty(const std::string& s) { return s == "-" ? "" : s; }
std::string empty_to_dash(const std::string& s) { return s.empty() ? "-" : s; }

}  // namespace

ParseError::ParseError(const std::string& file, int line, const std::string& msg)
    : Error(file + ":" + std::to_string(line) + ": " + msg),
      file_(file),
      line_(line) {}

// ---------------------------------------------------------------------------
// MultiwordTrie

void MultiwordTrie::insert(const std::vector<std::string>& words) {
  if (words.size() < 2) return;
  if (nodes_.empty()) nodes_.emplace_back();
  size_t cur = 0;
  for (const auto& w : words) {
    auto it = nodes_[cur].next.find(w);
    if (it == nodes_[cur].next.end()) {
      nodes_.emplace_back();
      nodes_[cur].next[w] = nodes_.size() - 1;
      cur = nodes_.size() - 1;
    } else {
      cur = it->second;
    }
  }
  nodes_[cur].terminal = true;
}

size_t MultiwordTrie::longest_match(const std::vector<std::string>& words,
                                    size_t pos) const {
  if (nodes_.empty()) return 0;
  size_t cur = 0;
  size_t best = 0;
  for (size_t i = pos; i < words.size(); ++i) {
    auto it = nodes_[cur].next.find(words[i]);
    if (it == nodes_[cur].next.end()) break;
    cur = it->second;
    if (nodes_[cur].terminal && i - pos + 1 >= 2) best = i - pos + 1;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Compiler

class DictionaryCompiler {
 public:
  DictionaryCompiler(const std::string& src_lang, const std::string& tgt_lang) {
    dict_ = std::make_shared<CompiledDictionary>();
    dict_->src_lang_ = src_lang;
    dict_->tgt_lang_ = tgt_lang;
  }

  void read_paradigms(std::istream& is, const std::string& name) {
    int lineno = 0;
    std::string line;
    Paradigm* open = nullptr;
    while (std::getline(is, line)) {
      ++lineno;
      if (is_comment_or_blank(line)) continue;
      auto fields = split_ws(line);
      if (fields[0] == "P") {
        if (fields.size() != 3)
          throw ParseError(name, lineno, "malformed paradigm header: expected 'P <id> <category>'");
        auto cat = category_from_string(fields[2]);
        if (!cat)
          throw ParseError(name, lineno, "unknown category '" + fields[2] + "'");
        for (const auto& p : dict_->paradigms_)
          if (p.id == fields[1])
            throw ParseError(name, lineno, "duplicate paradigm id '" + fields[1] + "'");
        dict_->paradigms_.push_back(Paradigm{fields[1], *cat, {}});
        open = &dict_->paradigms_.back();
      } else if (fields[0] == "F") {
        if (!open)
          throw ParseError(name, lineno, "form line before any paradigm header");
        if (fields.size() != 3)
          throw ParseError(name, lineno, "malformed form line: expected 'F <suffix> <tags>'");
        auto tags = parse_tags(fields[2]);
        if (!tags)
          throw ParseError(name, lineno, "unknown tag in '" + fields[2] + "'");
        open->forms.push_back(ParadigmForm{dash_to_empty(fields[1]), *tags});
      } else {
        throw ParseError(name, lineno, "unrecognized record '" + fields[0] + "'");
      }
    }
    for (const auto& p : dict_->paradigms_)
      if (p.forms.empty())
        throw Error(name + ": paradigm '" + p.id + "' has no forms");
  }

  void read_lemmas(std::istream& is, const std::string& name) {
    int lineno = 0;
    std::string line;
    while (std::getline(is, line)) {
      ++lineno;
      if (is_comment_or_blank(line)) continue;
      auto fields = split_ws(line);
      if (fields[0] != "L" || fields.size() != 4)
        throw ParseError(name, lineno, "malformed lemma line: expected 'L <lemma> <stem> <paradigm-id>'");
      LemmaEntry e;
      e.lemma = fields[1];
      // "-" = stem equals the lemma; "=" = empty stem (suppletive paradigms
      // whose forms are written out in full as suffixes).
      e.stem = fields[2];
      if (e.stem == "-")
        e.stem = e.lemma;
      else if (e.stem == "=")
        e.stem.clear();
      e.paradigm_id = fields[3];
      e.multiword = e.lemma.find('_') != std::string::npos;
      if (!find_paradigm(e.paradigm_id))
        throw ParseError(name, lineno, "unresolved paradigm id '" + e.paradigm_id + "'");
      dict_->lemma_entries_.push_back(std::move(e));
    }
  }

  void read_bilingual(std::istream& is, const std::string& name) {
    int lineno = 0;
    std::string line;
    uint32_t rank = 0;
    while (std::getline(is, line)) {
      ++lineno;
      if (is_comment_or_blank(line)) continue;
      auto fields = split_ws(line);
      if (fields[0] != "B" || (fields.size() != 5 && fields.size() != 6))
        throw ParseError(name, lineno,
                         "malformed bilingual line: expected 'B <src-lemma> <src-cat> <tgt-lemma> <tgt-cat> [<overrides>]'");
      BilingualEntry e;
      e.src_lemma = fields[1];
      auto sc = category_from_string(fields[2]);
      if (!sc) throw ParseError(name, lineno, "unknown category '" + fields[2] + "'");
      e.src_category = *sc;
      e.tgt_lemma = fields[3];
      auto tc = category_from_string(fields[4]);
      if (!tc) throw ParseError(name, lineno, "unknown category '" + fields[4] + "'");
      e.tgt_category = *tc;
      if (fields.size() == 6 && fields[5] != "-") {
        for (const auto& piece : split_char(fields[5], ',')) {
          auto tag = tag_from_string(piece);
          if (!tag)
            throw ParseError(name, lineno, "unknown tag '" + piece + "' in overrides");
          e.tag_overrides.push_back(TagRewrite{tag_attribute(*tag), *tag});
        }
      }
      e.rank = rank++;
      dict_->bilingual_entries_.push_back(std::move(e));
    }
  }

  DictionaryPtr finish() {
    if (dict_->lemma_entries_.empty())
      throw Error("empty dictionary: no lemma entries");

    std::set<std::pair<std::string, std::string>> seen;  // (lemma, paradigm)
    for (const auto& e : dict_->lemma_entries_) {
      if (!seen.insert({e.lemma, e.paradigm_id}).second) {
        dict_->report_.warnings.push_back("duplicate lemma entry '" + e.lemma +
                                          "' with paradigm '" + e.paradigm_id + "'");
        continue;
      }
      expand(e);
    }
    for (const auto& b : dict_->bilingual_entries_)
      dict_->bilingual_[{b.src_lemma, b.src_category}].push_back(b);

    check_citation_forms();
    check_shadowed_forms();

    dict_->report_.paradigms = dict_->paradigms_.size();
    dict_->report_.lemmas = dict_->lemma_entries_.size();
    dict_->report_.bilingual_entries = dict_->bilingual_entries_.size();
    return dict_;
  }

 private:
  const Paradigm* find_paradigm(const std::string& id) const {
    for (const auto& p : dict_->paradigms_)
      if (p.id == id) return &p;
    return nullptr;
  }

  void expand(const LemmaEntry& e) {
    const Paradigm* p = find_paradigm(e.paradigm_id);
    for (const auto& f : p->forms) {
      std::string surface = e.stem + f.suffix;
      Analysis a{e.lemma, p->category, f.tags};
      auto& bucket = dict_->analyzer_[surface];
      if (bucket.empty()) dict_->analyzer_order_.push_back(surface);
      if (std::find(bucket.begin(), bucket.end(), a) == bucket.end()) {
        bucket.push_back(a);
        ++dict_->report_.forms;
      }
      dict_->generator_[{e.lemma, p->category}].push_back(
          GeneratorEntry{f.tags, surface});
      if (e.multiword) {
        auto words = split_char(surface, '_');
        dict_->multiword_trie_.insert(words);
      }
    }
  }

  // Every lemma should analyse to itself (citation form present); advisory.
  void check_citation_forms() {
    for (const auto& e : dict_->lemma_entries_) {
      auto it = dict_->analyzer_.find(e.lemma);
      bool ok = false;
      if (it != dict_->analyzer_.end())
        for (const auto& a : it->second)
          if (a.lemma == e.lemma) ok = true;
      if (!ok)
        dict_->report_.warnings.push_back(
            "lemma '" + e.lemma + "' does not analyse to itself (citation form missing from paradigm '" +
            e.paradigm_id + "')");
    }
  }

  // A generator entry whose tags are a superset of a later entry's tags
  // shadows it: generate() can never return the later surface.
  void check_shadowed_forms() {
    for (const auto& [key, entries] : dict_->generator_) {
      for (size_t i = 0; i < entries.size(); ++i) {
        for (size_t j = i + 1; j < entries.size(); ++j) {
          if (entries[i].surface != entries[j].surface &&
              tags_subset(entries[j].tags, entries[i].tags)) {
            dict_->report_.warnings.push_back(
                "generator entry '" + entries[j].surface + "' for lemma '" +
                key.first + "' is shadowed by earlier form '" + entries[i].surface + "'");
          }
        }
      }
    }
  }

  std::shared_ptr<CompiledDictionary> dict_;
};

// ---------------------------------------------------------------------------
// CompiledDictionary

const std::vector<Analysis>& CompiledDictionary::analyze(
    const std::string& token) const {
  static const std::vector<Analysis> kEmpty;
  auto it = analyzer_.find(token);
  if (it != analyzer_.end()) return it->second;
  std::string lower = lowercase(token);
  if (lower != token) {
    it = analyzer_.find(lower);
    if (it != analyzer_.end()) return it->second;
  }
  return kEmpty;
}

std::string CompiledDictionary::generate(const std::string& lemma,
                                         Category category,
                                         const TagList& tags) const {
  auto it = generator_.find({lemma, category});
  if (it != generator_.end()) {
    for (const auto& entry : it->second)
      if (tags_subset(tags, entry.tags)) return entry.surface;
  }
  return "#" + lemma;
}

const std::vector<BilingualEntry>& CompiledDictionary::bilingual(
    const std::string& lemma, Category category) const {
  static const std::vector<BilingualEntry> kEmpty;
  auto it = bilingual_.find({lemma, category});
  return it == bilingual_.end() ? kEmpty : it->second;
}

void CompiledDictionary::for_each_analysis(
    const std::function<void(const std::string&, const Analysis&)>& fn) const {
  for (const auto& surface : analyzer_order_)
    for (const auto& a : analyzer_.at(surface)) fn(surface, a);
}

void CompiledDictionary::dump(std::ostream& os) const {
  os << "lvbmt-dict 1\n";
  os << "D " << src_lang_ << " " << tgt_lang_ << "\n";
  for (const auto& p : paradigms_) {
    os << "P " << p.id << " " << category_name(p.category) << "\n";
    for (const auto& f : p.forms)
      os << "F " << empty_to_dash(f.suffix) << " " << format_tags(f.tags) << "\n";
  }
  for (const auto& e : lemma_entries_) {
    std::string stem = e.stem == e.lemma ? "-" : e.stem.empty() ? "=" : e.stem;
    os << "L " << e.lemma << " " << stem << " " << e.paradigm_id << "\n";
  }
  for (const auto& b : bilingual_entries_) {
    os << "B " << b.src_lemma << " " << category_name(b.src_category) << " "
       << b.tgt_lemma << " " << category_name(b.tgt_category);
    if (!b.tag_overrides.empty()) {
      os << " ";
      for (size_t i = 0; i < b.tag_overrides.size(); ++i) {
        if (i) os << ",";
        os << tag_name(b.tag_overrides[i].value);
      }
    }
    os << "\n";
  }
}

void CompiledDictionary::save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write '" + path + "'");
  dump(os);
}

// ---------------------------------------------------------------------------
// Entry points

namespace {

DictionaryPtr compile_streams(std::istream& paradigms, const std::string& pname,
                              std::istream& lemmas, const std::string& lname,
                              std::istream& bilingual, const std::string& bname,
                              const std::string& src_lang,
                              const std::string& tgt_lang) {
  DictionaryCompiler c(src_lang, tgt_lang);
  c.read_paradigms(paradigms, pname);
  c.read_lemmas(lemmas, lname);
  c.read_bilingual(bilingual, bname);
  return c.finish();
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open '" + path + "'");
  return is;
}

}  // namespace

DictionaryPtr compile_dictionary(const std::string& paradigm_file,
                                 const std::string& lemma_file,
                                 const std::string& bilingual_file,
                                 const std::string& src_lang,
                                 const std::string& tgt_lang) {
  auto p = open_or_throw(paradigm_file);
  auto l = open_or_throw(lemma_file);
  auto b = open_or_throw(bilingual_file);
  return compile_streams(p, paradigm_file, l, lemma_file, b, bilingual_file,
                         src_lang, tgt_lang);
}

DictionaryPtr compile_dictionary_text(const std::string& paradigm_text,
                                      const std::string& lemma_text,
                                      const std::string& bilingual_text,
                                      const std::string& src_lang,
                                      const std::string& tgt_lang) {
  std::istringstream p(paradigm_text), l(lemma_text), b(bilingual_text);
  return compile_streams(p, "<paradigms>", l, "<lemmas>", b, "<bilingual>",
                         src_lang, tgt_lang);
}

DictionaryPtr load_dictionary(const std::string& path) {
  auto is = open_or_throw(path);
  std::string header;
  if (!std::getline(is, header) || header != "lvbmt-dict 1")
    throw Error(path + ": not a compiled dictionary (bad header)");
  std::string src_lang = "lvb", tgt_lang = "ita";
  std::ostringstream paradigms, lemmas, bilingual;
  std::string line;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    switch (line[0]) {
      case 'D': {
        auto fields = split_ws(line);
        if (fields.size() != 3)
          throw ParseError(path, lineno, "malformed direction line");
        src_lang = fields[1];
        tgt_lang = fields[2];
        break;
      }
      case 'P':
      case 'F':
        paradigms << line << "\n";
        break;
      case 'L':
        lemmas << line << "\n";
        break;
      case 'B':
        bilingual << line << "\n";
        break;
      default:
        throw ParseError(path, lineno, "unrecognized record '" + line.substr(0, 1) + "'");
    }
  }
  std::istringstream p(paradigms.str()), l(lemmas.str()), b(bilingual.str());
  return compile_streams(p, path, l, path, b, path, src_lang, tgt_lang);
}

CoverageReport coverage(const CompiledDictionary& dict,
                        const std::vector<std::string>& sentences) {
  CoverageReport r;
  std::map<std::string, size_t> unknown_counts;
  for (const auto& sent : sentences) {
    auto words = word_tokens(sent);
    size_t i = 0;
    while (i < words.size()) {
      size_t span = dict.multiwords().longest_match(words, i);
      if (span == 0) {
        std::vector<std::string> lower;
        lower.reserve(words.size() - i);
        for (size_t j = i; j < words.size(); ++j) lower.push_back(lowercase(words[j]));
        span = dict.multiwords().longest_match(lower, 0);
      }
      if (span >= 2) {
        r.tokens += span;
        r.known += span;
        i += span;
        continue;
      }
      ++r.tokens;
      if (!dict.analyze(words[i]).empty())
        ++r.known;
      else
        ++unknown_counts[lowercase(words[i])];
      ++i;
    }
  }
  if (r.tokens == 0) throw Error("empty corpus");
  r.fraction = static_cast<double>(r.known) / static_cast<double>(r.tokens);
  r.unknown_types.assign(unknown_counts.begin(), unknown_counts.end());
  std::stable_sort(r.unknown_types.begin(), r.unknown_types.end(),
                   [](const auto& a, const auto& b) {
                     if (a.second != b.second) return a.second > b.second;
                     return a.first < b.first;
                   });
  return r;
}

}  // namespace lvbmt
