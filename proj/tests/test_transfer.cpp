#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "lvbmt/transfer.hpp"
#include "support/testutil.hpp"

using namespace lvbmt;

namespace {

std::vector<TransferRule> rules_from(const std::string& text) {
  std::istringstream is(text);
  return parse_rules(is, "<test>");
}

DictionaryPtr fixture_dict(Direction d) {
  static DictionaryPtr fwd = compile_dictionary(
      testutil::data_path("dict/paradigms.txt"),
      testutil::data_path("dict/lemmas.txt"),
      testutil::data_path("dict/bilingual-lvb-ita.txt"), "lvb", "ita");
  static DictionaryPtr rev = compile_dictionary(
      testutil::data_path("dict/paradigms.txt"),
      testutil::data_path("dict/lemmas.txt"),
      testutil::data_path("dict/bilingual-ita-lvb.txt"), "ita", "lvb");
  return d == Direction::LvbToIta ? fwd : rev;
}

std::vector<TransferRule> fixture_rules(Direction d) {
  return parse_rules_file(
      testutil::data_path(d == Direction::LvbToIta ? "rules/lvb-ita.rules"
                                                   : "rules/ita-lvb.rules"));
}

}  // namespace

TEST_CASE("direction helpers") {
  CHECK(direction_name(Direction::LvbToIta) == "lvb-ita");
  CHECK(direction_from_string("ita-lvb") == Direction::ItaToLvb);
  CHECK_FALSE(direction_from_string("deu-ita").has_value());
  CHECK(reverse(Direction::LvbToIta) == Direction::ItaToLvb);
  CHECK(direction_src(Direction::ItaToLvb) == "ita");
  CHECK(direction_tgt(Direction::ItaToLvb) == "lvb");
}

TEST_CASE("rule DSL parses matchers and actions") {
  auto rules = rules_from(
      "# comment\n"
      "RULE one: MATCH [lemma=pa cat=adverb] => DELETE(0)\n"
      "RULE two: MATCH [cat=determiner] [cat=noun tag=f] => "
      "SET(0.gender=1.gender); REORDER(1,0)\n"
      "RULE three: MATCH [cat=verb] => REPLACE(0, essere); SET(0.number=pl)\n");
  REQUIRE(rules.size() == 3);
  CHECK(rules[0].id == "one");
  REQUIRE(rules[0].pattern.size() == 1);
  CHECK(rules[0].pattern[0].lemma == "pa");
  CHECK(rules[0].pattern[0].category == Category::Adverb);
  REQUIRE(rules[0].actions.size() == 1);
  CHECK(rules[0].actions[0].kind == RuleAction::Kind::Delete);

  REQUIRE(rules[1].pattern.size() == 2);
  CHECK(rules[1].pattern[1].tags.size() == 1);
  REQUIRE(rules[1].actions.size() == 2);
  CHECK(rules[1].actions[0].kind == RuleAction::Kind::SetFromUnit);
  CHECK(rules[1].actions[0].index == 0);
  CHECK(rules[1].actions[0].source == 1);
  CHECK(rules[1].actions[1].kind == RuleAction::Kind::Reorder);
  CHECK(rules[1].actions[1].order == std::vector<size_t>{1, 0});

  CHECK(rules[2].actions[0].kind == RuleAction::Kind::Replace);
  CHECK(rules[2].actions[0].text == "essere");
  CHECK(rules[2].actions[1].kind == RuleAction::Kind::SetLiteral);
}

TEST_CASE("rule validation rejects broken rules") {
  // Index out of range.
  CHECK_THROWS_AS(rules_from("RULE r: MATCH [cat=noun] => DELETE(1)\n"), Error);
  // REORDER must be a full permutation.
  CHECK_THROWS_AS(
      rules_from("RULE r: MATCH [cat=noun] [cat=adjective] => REORDER(0,0)\n"),
      Error);
  CHECK_THROWS_AS(
      rules_from("RULE r: MATCH [cat=noun] [cat=adjective] => REORDER(0)\n"),
      Error);
  // Literal tag must belong to the attribute being set.
  CHECK_THROWS_AS(
      rules_from("RULE r: MATCH [cat=noun] => SET(0.gender=pl)\n"), Error);
  // SET must copy within one attribute.
  CHECK_THROWS_AS(
      rules_from("RULE r: MATCH [cat=noun] [cat=noun] => SET(0.gender=1.number)\n"),
      ParseError);
  // Unknown matcher key / category / tag; empty pattern and matcher.
  CHECK_THROWS_AS(rules_from("RULE r: MATCH [case=abl] => DELETE(0)\n"),
                  ParseError);
  CHECK_THROWS_AS(rules_from("RULE r: MATCH [cat=gerund] => DELETE(0)\n"),
                  ParseError);
  CHECK_THROWS_AS(rules_from("RULE r: MATCH [] => DELETE(0)\n"), ParseError);
  CHECK_THROWS_AS(rules_from("RULE r: MATCH => DELETE(0)\n"), ParseError);
  CHECK_THROWS_AS(rules_from("RULE r: MATCH [cat=noun] DELETE(0)\n"),
                  ParseError);
  CHECK_THROWS_AS(rules_from("no header\n"), ParseError);
  // Duplicate rule ids are rejected.
  CHECK_THROWS_AS(rules_from("RULE r: MATCH [cat=noun] => DELETE(0)\n"
                             "RULE r: MATCH [cat=verb] => DELETE(0)\n"),
                  ParseError);
}

TEST_CASE("disambiguate picks the first analysis and skips unknowns") {
  auto dict = fixture_dict(Direction::LvbToIta);
  auto units = analyze_units(*dict, tokenize("le xyzzy"));
  REQUIRE(units.size() == 2);
  CHECK(units[0].chosen == -1);
  disambiguate(units);
  CHECK(units[0].chosen == 0);
  CHECK(units[1].analyses.empty());
  CHECK(units[1].chosen == -1);
}

TEST_CASE("lexical transfer applies the lowest-rank entry") {
  auto dict = fixture_dict(Direction::LvbToIta);
  auto units = analyze_units(*dict, tokenize("liber"));
  disambiguate(units);
  auto t = lexical_transfer(*dict, units[0]);
  CHECK(t.lemma == "libro");
  CHECK(t.category == Category::Noun);
  CHECK_FALSE(t.transfer_failed);
  CHECK(t.bilingual_used == "liber>libro");
}

TEST_CASE("tag overrides rewrite the transferred tags") {
  auto dict = fixture_dict(Direction::LvbToIta);
  // "flu" is feminine in Ladin; the bilingual entry forces masculine "fiore".
  auto units = analyze_units(*dict, tokenize("flu"));
  disambiguate(units);
  auto t = lexical_transfer(*dict, units[0]);
  CHECK(t.lemma == "fiore");
  auto g = find_attribute_tag(t.tags, Attribute::Gender);
  REQUIRE(g.has_value());
  CHECK(tag_name(*g) == "m");
}

TEST_CASE("markers: unknown, transfer failure, generation failure") {
  auto dict = testutil::mini_dict();

  auto r1 = translate(*dict, {}, "xyzzy", Direction::LvbToIta);
  CHECK(r1.target_text == "*xyzzy");
  CHECK(r1.unknown_count == 1);

  // "pa" has no bilingual entry in the mini dictionary.
  auto r2 = translate(*dict, {}, "pa", Direction::LvbToIta);
  CHECK(r2.target_text == "@pa");
  CHECK(r2.unknown_count == 0);

  // Force an ungeneratable tag combination: the nm paradigm has no f,sg.
  auto rules = rules_from("RULE force: MATCH [cat=noun] => SET(0.gender=f)\n");
  auto dict2 = compile_dictionary_text(
      testutil::kMiniParadigms, testutil::kMiniLemmas,
      "B liber noun libro noun\n", "lvb", "ita");
  auto r3 = translate(*dict2, rules, "liber", Direction::LvbToIta);
  CHECK(r3.target_text == "#libro");
}

TEST_CASE("sentence of only unknown tokens keeps every token marked") {
  auto dict = testutil::mini_dict();
  auto r = translate(*dict, {}, "qq ww ee", Direction::LvbToIta);
  CHECK(r.target_text == "*qq *ww *ee");
  CHECK(r.unknown_count == 3);
}

TEST_CASE("empty rule list is the identity over transfer output") {
  auto dict = fixture_dict(Direction::LvbToIta);
  auto with_rules = translate(*dict, {}, "liber vedl", Direction::LvbToIta);
  CHECK(with_rules.target_text == "libro vecchio");
}

TEST_CASE("REPLACE swaps the lemma and clears a transfer failure") {
  auto dict = testutil::mini_dict();
  auto rules = rules_from(
      "RULE fix-pa: MATCH [lemma=pa cat=adverb] => REPLACE(0, a_destra)\n");
  auto r = translate(*dict, rules, "pa", Direction::LvbToIta);
  CHECK(r.target_text == "a destra");
}

TEST_CASE("translate renders the flagship pair") {
  auto dict = fixture_dict(Direction::LvbToIta);
  auto rules = fixture_rules(Direction::LvbToIta);
  auto r = translate(*dict, rules, "chësc liber é to", Direction::LvbToIta);
  CHECK(r.target_text == "questo libro è tuo");
  CHECK(r.unknown_count == 0);
}

TEST_CASE("pa is deleted and capitalization restored") {
  auto dict = fixture_dict(Direction::LvbToIta);
  auto rules = fixture_rules(Direction::LvbToIta);
  auto r = translate(*dict, rules, "Olá é pa le liber?", Direction::LvbToIta);
  CHECK(r.target_text == "Dove è il libro?");
}

TEST_CASE("multiword entries fuse into one unit") {
  auto dict = fixture_dict(Direction::LvbToIta);
  auto rules = fixture_rules(Direction::LvbToIta);
  auto r = translate(*dict, rules, "Ël á prescia incö.", Direction::LvbToIta);
  CHECK(r.target_text == "Lui ha fretta oggi.");
  // The fused unit appears once in the trace with its source spacing.
  bool fused = false;
  for (const auto& e : r.trace)
    if (e.src_surface == "á prescia" && e.output == "ha fretta") fused = true;
  CHECK(fused);
}

TEST_CASE("trace records analysis, bilingual entry, and fired rules") {
  auto dict = fixture_dict(Direction::LvbToIta);
  auto rules = fixture_rules(Direction::LvbToIta);
  auto r = translate(*dict, rules, "la flu é bela", Direction::LvbToIta);
  CHECK(r.target_text == "il fiore è bello");
  REQUIRE(r.trace.size() == 4);
  CHECK(r.trace[0].src_surface == "la");
  CHECK(r.trace[0].analysis == "il/determiner[m,sg]");
  CHECK(r.trace[0].bilingual == "le>il");
  CHECK(r.trace[0].rules == "clause-agree");
  CHECK(r.trace[1].bilingual == "flu>fiore");
  CHECK(r.trace[3].output == "bello");
}

TEST_CASE("longest pattern wins at each position") {
  auto dict = testutil::mini_dict();
  // Both rules match at index 0; the longer pattern must be chosen even
  // though the shorter one is listed first.
  auto rules = rules_from(
      "RULE short: MATCH [cat=noun] => SET(0.number=pl)\n"
      "RULE long: MATCH [cat=noun] [cat=adjective] => SET(1.number=pl)\n");
  auto r = translate(*dict, rules, "liber bel", Direction::LvbToIta);
  CHECK(r.target_text == "libro belli");
}

TEST_CASE("matched spans do not overlap") {
  auto dict = testutil::mini_dict();
  // After [noun][adj] matches at 0, scanning resumes past the span, so the
  // [adj][noun] rule cannot also fire on the middle token.
  auto rules = rules_from(
      "RULE na: MATCH [cat=noun] [cat=adjective] => SET(0.number=pl)\n"
      "RULE an: MATCH [cat=adjective] [cat=noun] => SET(1.number=pl)\n");
  auto r = translate(*dict, rules, "liber bel liber", Direction::LvbToIta);
  CHECK(r.target_text == "libri bello libro");
}

TEST_CASE("deleting a unit leaves the rest untouched") {
  auto dict = fixture_dict(Direction::LvbToIta);
  auto rules = fixture_rules(Direction::LvbToIta);
  auto with = translate(*dict, rules, "olá é pa le liber", Direction::LvbToIta);
  auto without = translate(*dict, rules, "olá é le liber", Direction::LvbToIta);
  CHECK(with.target_text == without.target_text);
}

TEST_CASE("rules with disjoint patterns commute") {
  auto dict = testutil::mini_dict();
  std::vector<std::string> rule_lines = {
      "RULE a: MATCH [lemma=pa cat=adverb] => DELETE(0)\n",
      "RULE b: MATCH [cat=noun] [cat=adjective] => REORDER(1,0)\n",
      "RULE c: MATCH [lemma=a_destra cat=adverb] => REPLACE(0, pa)\n",
  };
  const std::string text = "liber bel pa a man derta ciasa";
  std::string expected;
  std::mt19937_64 rng(3);
  for (int it = 0; it < 12; ++it) {
    std::shuffle(rule_lines.begin(), rule_lines.end(), rng);
    std::string joined;
    for (const auto& l : rule_lines) joined += l;
    auto out = translate(*dict, rules_from(joined), text, Direction::LvbToIta)
                   .target_text;
    if (expected.empty())
      expected = out;
    else
      CHECK(out == expected);
  }
}

TEST_CASE("identity bilingual mapping round-trips dictionary sentences") {
  // With every lemma mapped to itself, translation reduces to the
  // analyzer/generator round trip.
  std::string bilingual =
      "B liber noun liber noun\n"
      "B ciasa noun ciasa noun\n"
      "B bel adjective bel adjective\n"
      "B pa adverb pa adverb\n";
  auto dict = compile_dictionary_text(testutil::kMiniParadigms,
                                      testutil::kMiniLemmas, bilingual,
                                      "lvb", "ita");
  const char* sentences[] = {"liber bel", "ciases beles, pa!", "Liberi bels."};
  for (const auto* s : sentences) {
    auto r = translate(*dict, {}, s, Direction::LvbToIta);
    CHECK(r.target_text == s);
  }
}

TEST_CASE("translate rejects a direction the dictionary was not built for") {
  auto dict = fixture_dict(Direction::LvbToIta);
  CHECK_THROWS_AS(translate(*dict, {}, "liber", Direction::ItaToLvb), Error);
}

TEST_CASE("unknown-marker count equals unanalyzable tokens") {
  auto dict = fixture_dict(Direction::LvbToIta);
  auto rules = fixture_rules(Direction::LvbToIta);
  std::mt19937_64 rng(17);
  std::vector<std::string> known = {"liber", "ćiasa", "é", "bun", "pa", "incö"};
  for (int it = 0; it < 50; ++it) {
    std::string text;
    size_t expect_unknown = 0;
    size_t len = 1 + rng() % 6;
    for (size_t i = 0; i < len; ++i) {
      if (!text.empty()) text += " ";
      if (rng() % 3 == 0) {
        text += "zz" + std::to_string(rng() % 100);
        ++expect_unknown;
      } else {
        text += known[rng() % known.size()];
      }
    }
    auto r = translate(*dict, rules, text, Direction::LvbToIta);
    CHECK(r.unknown_count == expect_unknown);
    size_t stars = 0;
    for (size_t p = 0; (p = r.target_text.find('*', p)) != std::string::npos; ++p)
      ++stars;
    CHECK(stars == expect_unknown);
  }
}
