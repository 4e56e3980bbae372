#ifndef LVBMT_TRANSFER_HPP
#define LVBMT_TRANSFER_HPP

#include <optional>
#include <string>
#include <vector>

#include "lvbmt/dictionary.hpp"
#include "lvbmt/tags.hpp"
#include "lvbmt/text.hpp"

namespace lvbmt {

enum class Direction { LvbToIta, ItaToLvb };

std::string direction_name(Direction d);                       // "lvb-ita"
std::optional<Direction> direction_from_string(std::string_view s);
Direction reverse(Direction d);
std::string direction_src(Direction d);  // "lvb" / "ita"
std::string direction_tgt(Direction d);

// One pattern element; all present constraints must hold.
struct Matcher {
  std::optional<std::string> lemma;
  std::optional<Category> category;
  TagList tags;  // every listed tag must be on the unit
};

struct RuleAction {
  enum class Kind { Delete, SetFromUnit, SetLiteral, Reorder, Replace };
  Kind kind = Kind::Delete;
  size_t index = 0;            // unit the action targets (original position)
  Attribute attribute = Attribute::Gender;  // Set*
  size_t source = 0;           // SetFromUnit: unit to copy from
  Tag literal = 0;             // SetLiteral
  std::vector<size_t> order;   // Reorder: permutation of 0..len-1
  std::string text;            // Replace: new lemma
};

struct TransferRule {
  std::string id;
  std::vector<Matcher> pattern;
  std::vector<RuleAction> actions;
};

// Throws Error when an invariant fails (empty pattern, index out of range,
// Reorder not a permutation, literal tag not of the Set attribute).
void validate_rule(const TransferRule& rule);

std::vector<TransferRule> parse_rules(std::istream& is, const std::string& name);
std::vector<TransferRule> parse_rules_file(const std::string& path);

// Source token after analysis; multiword entries are fused into one unit
// whose surface joins the covered tokens with '_'.
struct LexicalUnit {
  std::string surface;
  std::string sep;  // separator before this unit in the source text
  TokenKind kind = TokenKind::Word;
  std::vector<Analysis> analyses;
  int chosen = -1;  // index into analyses; -1 = unknown / not chosen yet
};

// Unit after lexical transfer, carrying source provenance for the trace.
struct TargetUnit {
  std::string src_surface;
  std::string sep;
  TokenKind kind = TokenKind::Word;
  bool content = false;  // true iff the unit carries a real analysis
  bool capitalize = false;

  std::string lemma;  // target lemma; source lemma when transfer failed
  Category category = Category::Noun;
  TagList tags;
  bool unknown = false;          // no analysis: render "*"+src_surface
  bool transfer_failed = false;  // no bilingual entry: render "@"+lemma

  std::string bilingual_used;      // "src>tgt" or "" for the trace
  std::vector<std::string> fired;  // rule ids applied over this unit
};

struct TraceEntry {
  std::string src_surface;
  std::string analysis;   // "lemma/cat[tags]" or "-"
  std::string bilingual;  // "src>tgt" or "-"
  std::string rules;      // comma-joined rule ids or "-"
  std::string output;
};

struct TranslationResult {
  std::string target_text;
  std::vector<TraceEntry> trace;
  size_t unknown_count = 0;
};

// Pipeline stages, exposed for tests and the trace tool.
std::vector<LexicalUnit> analyze_units(const CompiledDictionary& dict,
                                       const TokenStream& stream);
void disambiguate(std::vector<LexicalUnit>& units);
TargetUnit lexical_transfer(const CompiledDictionary& dict,
                            const LexicalUnit& unit);
std::vector<TargetUnit> apply_rules(const std::vector<TransferRule>& rules,
                                    std::vector<TargetUnit> units);
// Surface for one unit: marker-prefixed on failure, '_' joiner expanded,
// capitalization restored.
std::string render_unit(const CompiledDictionary& dict, const TargetUnit& unit);

// Full pipeline. Throws Error when the dictionary direction disagrees.
TranslationResult translate(const CompiledDictionary& dict,
                            const std::vector<TransferRule>& rules,
                            const std::string& text, Direction direction);

}  // namespace lvbmt

#endif
