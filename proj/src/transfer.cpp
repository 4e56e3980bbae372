#include "lvbmt/transfer.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace lvbmt {

std::string direction_name(Direction d) {
  return d == Direction::LvbToIta ? "lvb-ita" : "ita-lvb";
}

std::optional<Direction> direction_from_string(std::string_view s) {
  if (s == "lvb-ita") return Direction::LvbToIta;
  if (s == "ita-lvb") return Direction::ItaToLvb;
  return std::nullopt;
}

Direction reverse(Direction d) {
  return d == Direction::LvbToIta ? Direction::ItaToLvb : Direction::LvbToIta;
}

std::string direction_src(Direction d) {
  return d == Direction::LvbToIta ? "lvb" : "ita";
}

std::string direction_tgt(Direction d) {
  return d == Direction::LvbToIta ? "ita" : "lvb";
}

// ---------------------------------------------------------------------------
// Rule parsing

void validate_rule(const TransferRule& rule) {
  const std::string where = "rule '" + rule.id + "': ";
  if (rule.pattern.empty()) throw Error(where + "empty pattern");
  const size_t len = rule.pattern.size();
  for (const auto& a : rule.actions) {
    switch (a.kind) {
      case RuleAction::Kind::Delete:
      case RuleAction::Kind::Replace:
        if (a.index >= len) throw Error(where + "action index out of range");
        break;
      case RuleAction::Kind::SetFromUnit:
        if (a.index >= len || a.source >= len)
          throw Error(where + "action index out of range");
        break;
      case RuleAction::Kind::SetLiteral:
        if (a.index >= len) throw Error(where + "action index out of range");
        if (tag_attribute(a.literal) != a.attribute)
          throw Error(where + "tag '" + std::string(tag_name(a.literal)) +
                      "' does not belong to attribute '" +
                      std::string(attribute_name(a.attribute)) + "'");
        break;
      case RuleAction::Kind::Reorder: {
        if (a.order.size() != len)
          throw Error(where + "REORDER must list every pattern position");
        std::vector<bool> seen(len, false);
        for (size_t v : a.order) {
          if (v >= len || seen[v])
            throw Error(where + "REORDER is not a permutation of 0.." +
                        std::to_string(len - 1));
          seen[v] = true;
        }
        break;
      }
    }
  }
}

namespace {

std::string strip(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(strip(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(strip(cur));
  return out;
}

Matcher parse_matcher(const std::string& body, const std::string& file, int lineno) {
  Matcher m;
  std::string normalized = body;
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::istringstream iss(normalized);
  std::string kv;
  bool any = false;
  while (iss >> kv) {
    any = true;
    size_t eq = kv.find('=');
    if (eq == std::string::npos)
      throw ParseError(file, lineno, "matcher constraint '" + kv + "' is not key=value");
    std::string key = kv.substr(0, eq);
    std::string value = kv.substr(eq + 1);
    if (key == "lemma") {
      m.lemma = value;
    } else if (key == "cat") {
      auto c = category_from_string(value);
      if (!c) throw ParseError(file, lineno, "unknown category '" + value + "'");
      m.category = *c;
    } else if (key == "tag") {
      auto t = tag_from_string(value);
      if (!t) throw ParseError(file, lineno, "unknown tag '" + value + "'");
      m.tags.push_back(*t);
    } else {
      throw ParseError(file, lineno, "unknown matcher key '" + key + "'");
    }
  }
  if (!any) throw ParseError(file, lineno, "empty matcher");
  return m;
}

size_t parse_index(const std::string& s, const std::string& file, int lineno) {
  std::string t = strip(s);
  if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError(file, lineno, "expected a pattern index, got '" + s + "'");
  return static_cast<size_t>(std::stoul(t));
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\'')))
    return s.substr(1, s.size() - 2);
  return s;
}

RuleAction parse_action(const std::string& text, const std::string& file, int lineno) {
  std::string t = strip(text);
  size_t open = t.find('(');
  if (open == std::string::npos || t.back() != ')')
    throw ParseError(file, lineno, "malformed action '" + text + "'");
  std::string name = strip(t.substr(0, open));
  std::string args = t.substr(open + 1, t.size() - open - 2);
  RuleAction a;
  if (name == "DELETE") {
    a.kind = RuleAction::Kind::Delete;
    a.index = parse_index(args, file, lineno);
  } else if (name == "REORDER") {
    a.kind = RuleAction::Kind::Reorder;
    for (const auto& piece : split_list(args, ','))
      a.order.push_back(parse_index(piece, file, lineno));
  } else if (name == "REPLACE") {
    a.kind = RuleAction::Kind::Replace;
    auto pieces = split_list(args, ',');
    if (pieces.size() != 2)
      throw ParseError(file, lineno, "REPLACE takes (index, lemma)");
    a.index = parse_index(pieces[0], file, lineno);
    a.text = unquote(pieces[1]);
    if (a.text.empty()) throw ParseError(file, lineno, "REPLACE with empty lemma");
  } else if (name == "SET") {
    // SET(i.attr = j.attr) or SET(i.attr = literal-tag)
    size_t eq = args.find('=');
    if (eq == std::string::npos)
      throw ParseError(file, lineno, "SET takes (index.attr=value)");
    std::string lhs = strip(args.substr(0, eq));
    std::string rhs = strip(args.substr(eq + 1));
    size_t dot = lhs.find('.');
    if (dot == std::string::npos)
      throw ParseError(file, lineno, "SET left side must be index.attr");
    a.index = parse_index(lhs.substr(0, dot), file, lineno);
    auto attr = attribute_from_string(lhs.substr(dot + 1));
    if (!attr)
      throw ParseError(file, lineno, "unknown attribute '" + lhs.substr(dot + 1) + "'");
    a.attribute = *attr;
    size_t rdot = rhs.find('.');
    if (rdot != std::string::npos &&
        rhs.find_first_not_of("0123456789") == rdot) {
      a.kind = RuleAction::Kind::SetFromUnit;
      a.source = parse_index(rhs.substr(0, rdot), file, lineno);
      auto rattr = attribute_from_string(rhs.substr(rdot + 1));
      if (!rattr)
        throw ParseError(file, lineno, "unknown attribute '" + rhs.substr(rdot + 1) + "'");
      if (*rattr != a.attribute)
        throw ParseError(file, lineno, "SET copies across attributes");
    } else {
      a.kind = RuleAction::Kind::SetLiteral;
      auto tag = tag_from_string(rhs);
      if (!tag) throw ParseError(file, lineno, "unknown tag '" + rhs + "'");
      a.literal = *tag;
    }
  } else {
    throw ParseError(file, lineno, "unknown action '" + name + "'");
  }
  return a;
}

}  // namespace

std::vector<TransferRule> parse_rules(std::istream& is, const std::string& name) {
  std::vector<TransferRule> rules;
  std::set<std::string> ids;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = strip(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.rfind("RULE ", 0) != 0)
      throw ParseError(name, lineno, "expected 'RULE <id>: ...'");
    size_t colon = t.find(':');
    if (colon == std::string::npos)
      throw ParseError(name, lineno, "missing ':' after rule id");
    TransferRule rule;
    rule.id = strip(t.substr(5, colon - 5));
    if (rule.id.empty()) throw ParseError(name, lineno, "empty rule id");
    if (!ids.insert(rule.id).second)
      throw ParseError(name, lineno, "duplicate rule id '" + rule.id + "'");
    std::string rest = strip(t.substr(colon + 1));
    if (rest.rfind("MATCH", 0) != 0)
      throw ParseError(name, lineno, "expected 'MATCH' after rule id");
    rest = strip(rest.substr(5));
    size_t arrow = rest.find("=>");
    if (arrow == std::string::npos)
      throw ParseError(name, lineno, "missing '=>' between pattern and actions");
    std::string pattern_text = strip(rest.substr(0, arrow));
    std::string action_text = strip(rest.substr(arrow + 2));
    size_t pos = 0;
    while (pos < pattern_text.size()) {
      if (std::isspace(static_cast<unsigned char>(pattern_text[pos]))) {
        ++pos;
        continue;
      }
      if (pattern_text[pos] != '[')
        throw ParseError(name, lineno, "pattern elements must be bracketed");
      size_t close = pattern_text.find(']', pos);
      if (close == std::string::npos)
        throw ParseError(name, lineno, "unterminated '[' in pattern");
      rule.pattern.push_back(
          parse_matcher(pattern_text.substr(pos + 1, close - pos - 1), name, lineno));
      pos = close + 1;
    }
    for (const auto& piece : split_list(action_text, ';'))
      if (!piece.empty()) rule.actions.push_back(parse_action(piece, name, lineno));
    try {
      validate_rule(rule);
    } catch (const Error& e) {
      throw ParseError(name, lineno, e.what());
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

std::vector<TransferRule> parse_rules_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open '" + path + "'");
  return parse_rules(is, path);
}

// ---------------------------------------------------------------------------
// Pipeline

std::vector<LexicalUnit> analyze_units(const CompiledDictionary& dict,
                                       const TokenStream& stream) {
  std::vector<LexicalUnit> units;
  const auto& toks = stream.tokens;
  size_t i = 0;
  while (i < toks.size()) {
    if (toks[i].kind == TokenKind::Word && !dict.multiwords().empty()) {
      // Longest multiword match over the upcoming run of word tokens.
      std::vector<std::string> run;
      for (size_t j = i; j < toks.size() && toks[j].kind == TokenKind::Word; ++j)
        run.push_back(lowercase(toks[j].text));
      size_t span = dict.multiwords().longest_match(run, 0);
      if (span >= 2) {
        std::string joined;
        std::string joined_src;
        for (size_t k = 0; k < span; ++k) {
          if (k) {
            joined += "_";
            joined_src += toks[i + k].sep;
          }
          joined += lowercase(toks[i + k].text);
          joined_src += toks[i + k].text;
        }
        LexicalUnit u;
        u.surface = joined_src;
        u.sep = toks[i].sep;
        u.kind = TokenKind::Word;
        u.analyses = dict.analyze(joined);
        units.push_back(std::move(u));
        i += span;
        continue;
      }
    }
    LexicalUnit u;
    u.surface = toks[i].text;
    u.sep = toks[i].sep;
    u.kind = toks[i].kind;
    if (u.kind == TokenKind::Word) u.analyses = dict.analyze(u.surface);
    units.push_back(std::move(u));
    ++i;
  }
  return units;
}

void disambiguate(std::vector<LexicalUnit>& units) {
  for (auto& u : units)
    if (!u.analyses.empty()) u.chosen = 0;
}

TargetUnit lexical_transfer(const CompiledDictionary& dict,
                            const LexicalUnit& unit) {
  TargetUnit t;
  t.src_surface = unit.surface;
  t.sep = unit.sep;
  t.kind = unit.kind;
  t.capitalize = starts_uppercase(unit.surface);
  if (unit.kind != TokenKind::Word) return t;  // punctuation/number passthrough
  if (unit.chosen < 0) {
    t.unknown = true;
    return t;
  }
  const Analysis& a = unit.analyses[static_cast<size_t>(unit.chosen)];
  t.content = true;
  t.tags = a.tags;
  const auto& entries = dict.bilingual(a.lemma, a.category);
  if (entries.empty()) {
    t.lemma = a.lemma;
    t.category = a.category;
    t.transfer_failed = true;
    return t;
  }
  const BilingualEntry& b = entries.front();
  t.lemma = b.tgt_lemma;
  t.category = b.tgt_category;
  for (const auto& rw : b.tag_overrides)
    set_attribute_tag(t.tags, rw.attribute, rw.value);
  t.bilingual_used = b.src_lemma + ">" + b.tgt_lemma;
  return t;
}

namespace {

bool matches(const Matcher& m, const TargetUnit& u) {
  if (!u.content) return false;
  if (m.lemma && *m.lemma != u.lemma) return false;
  if (m.category && *m.category != u.category) return false;
  for (Tag t : m.tags)
    if (std::find(u.tags.begin(), u.tags.end(), t) == u.tags.end()) return false;
  return true;
}

bool pattern_matches(const std::vector<Matcher>& pattern,
                     const std::vector<TargetUnit>& units, size_t pos) {
  if (pos + pattern.size() > units.size()) return false;
  for (size_t k = 0; k < pattern.size(); ++k)
    if (!matches(pattern[k], units[pos + k])) return false;
  return true;
}

// Applies one rule's actions to the matched span. Action indices refer to
// the original pattern positions regardless of earlier deletions/reorders.
std::vector<TargetUnit> apply_actions(const TransferRule& rule,
                                      std::vector<TargetUnit> span) {
  const size_t len = span.size();
  std::vector<bool> present(len, true);
  std::vector<size_t> order(len);
  std::iota(order.begin(), order.end(), 0);
  for (const auto& a : rule.actions) {
    switch (a.kind) {
      case RuleAction::Kind::Delete:
        present[a.index] = false;
        break;
      case RuleAction::Kind::SetFromUnit: {
        auto src = find_attribute_tag(span[a.source].tags, a.attribute);
        if (src) set_attribute_tag(span[a.index].tags, a.attribute, *src);
        break;
      }
      case RuleAction::Kind::SetLiteral:
        set_attribute_tag(span[a.index].tags, tag_attribute(a.literal),
                          a.literal);
        break;
      case RuleAction::Kind::Reorder:
        order = a.order;
        break;
      case RuleAction::Kind::Replace:
        span[a.index].lemma = a.text;
        // A replaced lemma is a deliberate rewrite; it renders through the
        // generator even when lexical transfer had no entry.
        span[a.index].transfer_failed = false;
        break;
    }
  }
  std::vector<TargetUnit> out;
  std::string first_sep = span.empty() ? std::string() : span[0].sep;
  for (size_t idx : order) {
    if (!present[idx]) continue;
    TargetUnit u = span[idx];
    u.fired.push_back(rule.id);
    // The span's leading separator belongs to whichever unit now comes
    // first; later units get a plain space.
    u.sep = out.empty() ? first_sep : " ";
    out.push_back(std::move(u));
  }
  return out;
}

}  // namespace

std::vector<TargetUnit> apply_rules(const std::vector<TransferRule>& rules,
                                    std::vector<TargetUnit> units) {
  if (rules.empty()) return units;
  std::vector<TargetUnit> out;
  size_t i = 0;
  while (i < units.size()) {
    const TransferRule* best = nullptr;
    for (const auto& r : rules) {
      if (best && r.pattern.size() <= best->pattern.size()) continue;
      if (pattern_matches(r.pattern, units, i)) best = &r;
    }
    if (!best) {
      out.push_back(std::move(units[i]));
      ++i;
      continue;
    }
    size_t len = best->pattern.size();
    std::vector<TargetUnit> span(units.begin() + static_cast<long>(i),
                                 units.begin() + static_cast<long>(i + len));
    for (auto& u : apply_actions(*best, std::move(span)))
      out.push_back(std::move(u));
    i += len;
  }
  return out;
}

std::string render_unit(const CompiledDictionary& dict, const TargetUnit& unit) {
  if (unit.kind != TokenKind::Word && !unit.content && !unit.unknown)
    return unit.src_surface;
  std::string surface;
  if (unit.unknown) {
    return "*" + unit.src_surface;
  } else if (unit.transfer_failed) {
    surface = "@" + unit.lemma;
  } else {
    surface = dict.generate(unit.lemma, unit.category, unit.tags);
  }
  std::replace(surface.begin(), surface.end(), '_', ' ');
  if (unit.capitalize) surface = capitalize_first(surface);
  return surface;
}

TranslationResult translate(const CompiledDictionary& dict,
                            const std::vector<TransferRule>& rules,
                            const std::string& text, Direction direction) {
  if (dict.src_lang() != direction_src(direction) ||
      dict.tgt_lang() != direction_tgt(direction))
    throw Error("dictionary is " + dict.src_lang() + "-" + dict.tgt_lang() +
                " but direction " + direction_name(direction) + " was requested");

  TokenStream stream = tokenize(text);
  auto units = analyze_units(dict, stream);
  disambiguate(units);

  TranslationResult result;
  std::vector<TargetUnit> targets;
  targets.reserve(units.size());
  for (const auto& u : units) {
    if (u.kind == TokenKind::Word && u.chosen < 0) ++result.unknown_count;
    targets.push_back(lexical_transfer(dict, u));
  }
  targets = apply_rules(rules, std::move(targets));

  std::string out;
  for (size_t i = 0; i < targets.size(); ++i) {
    const auto& t = targets[i];
    std::string rendered = render_unit(dict, t);
    out += (i == 0 ? std::string() : t.sep) + rendered;

    TraceEntry e;
    e.src_surface = t.src_surface;
    if (t.content) {
      e.analysis = t.lemma + "/" + std::string(category_name(t.category)) + "[" +
                   format_tags(t.tags) + "]";
    } else {
      e.analysis = "-";
    }
    e.bilingual = t.bilingual_used.empty() ? "-" : t.bilingual_used;
    if (t.fired.empty()) {
      e.rules = "-";
    } else {
      for (size_t k = 0; k < t.fired.size(); ++k)
        e.rules += (k ? "," : "") + t.fired[k];
    }
    e.output = rendered;
    result.trace.push_back(std::move(e));
  }
  result.target_text = out + stream.trailing;
  return result;
}

}  // namespace lvbmt
