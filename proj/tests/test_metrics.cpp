#include <doctest.h>

#include <cmath>
#include <random>

#include "lvbmt/metrics.hpp"
#include "support/testutil.hpp"

using namespace lvbmt;

namespace {

const BleuOptions kPretok{/*pretokenized=*/true, /*smooth_k=*/0.0};
const ChrfOptions kPretokChrf{/*pretokenized=*/true};

DictionaryPtr dict_for(Direction d) {
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

std::shared_ptr<InternalRbmtBackend> rbmt_backend(bool both_directions) {
  auto b = std::make_shared<InternalRbmtBackend>("rbmt");
  b->add_direction(Direction::LvbToIta, dict_for(Direction::LvbToIta),
                   parse_rules_file(testutil::data_path("rules/lvb-ita.rules")));
  if (both_directions)
    b->add_direction(Direction::ItaToLvb, dict_for(Direction::ItaToLvb),
                     parse_rules_file(testutil::data_path("rules/ita-lvb.rules")));
  return b;
}

}  // namespace

// Reference scores below were produced by an independent reimplementation
// of both metrics (tests/support/ref_scores.py) and frozen.

TEST_CASE("degenerate repetition: clipping zeroes BLEU, chrF++ stays low") {
  auto b = bleu({"the the the the"}, {"the cat"}, kPretok);
  CHECK(b.bleu == 0.0);
  CHECK(b.precisions[0] == 25.0);  // "the" clipped to one match
  CHECK(b.precisions[1] == 0.0);
  CHECK(b.brevity_penalty == 1.0);  // hypothesis is the longer side
  auto c = chrfpp({"the the the the"}, {"the cat"}, kPretokChrf);
  CHECK(c.chrfpp == doctest::Approx(18.5888819961).epsilon(1e-9));
}

TEST_CASE("three-sentence corpus matches the frozen reference") {
  const std::vector<std::string> hyp = {
      "il ragazzo mangia pane oggi", "la casa è bella", "dove è il libro"};
  const std::vector<std::string> ref = {
      "il ragazzo mangia pane", "la casa è molto bella", "dove è il libro"};
  auto b = bleu(hyp, ref, kPretok);
  CHECK(b.bleu == doctest::Approx(71.6625837528).epsilon(1e-9));
  CHECK(b.precisions[0] == doctest::Approx(100.0 * 12 / 13).epsilon(1e-12));
  CHECK(b.precisions[1] == doctest::Approx(100.0 * 8 / 10).epsilon(1e-12));
  CHECK(b.precisions[2] == doctest::Approx(100.0 * 5 / 7).epsilon(1e-12));
  CHECK(b.precisions[3] == doctest::Approx(100.0 * 1 / 2).epsilon(1e-12));
  CHECK(b.brevity_penalty == 1.0);
  CHECK(b.hyp_length == 13);
  CHECK(b.ref_length == 13);
  auto c = chrfpp(hyp, ref, kPretokChrf);
  CHECK(c.chrfpp == doctest::Approx(82.3111666247).epsilon(1e-9));
}

TEST_CASE("single near-miss word") {
  auto b = bleu({"abcd"}, {"abce"}, kPretok);
  CHECK(b.bleu == 0.0);
  auto c = chrfpp({"abcd"}, {"abce"}, kPretokChrf);
  CHECK(c.chrfpp == doctest::Approx(38.3333333333).epsilon(1e-9));
  CHECK(sentence_chrfpp("abcd", "abce", kPretokChrf) ==
        doctest::Approx(38.3333333333).epsilon(1e-9));
}

TEST_CASE("identity scores exactly 100") {
  const std::vector<std::string> s = {"questo libro è tuo"};
  CHECK(bleu(s, s, kPretok).bleu == 100.0);
  CHECK(chrfpp(s, s, kPretokChrf).chrfpp == 100.0);
  CHECK(sentence_chrfpp("questo libro è tuo", "questo libro è tuo") == 100.0);
}

TEST_CASE("two-sentence corpus matches the frozen reference") {
  const std::vector<std::string> hyp = {"le case sono nuove", "il sole è alto"};
  const std::vector<std::string> ref = {"le case sono vecchie",
                                        "il sole è alto oggi"};
  CHECK(bleu(hyp, ref, kPretok).bleu ==
        doctest::Approx(63.8157251305).epsilon(1e-9));
  CHECK(chrfpp(hyp, ref, kPretokChrf).chrfpp ==
        doctest::Approx(67.2771333711).epsilon(1e-9));
}

TEST_CASE("scores ignore the order of sentence pairs") {
  const std::vector<std::string> hyp = {
      "il ragazzo mangia pane oggi", "la casa è bella", "dove è il libro"};
  const std::vector<std::string> ref = {
      "il ragazzo mangia pane", "la casa è molto bella", "dove è il libro"};
  const std::vector<std::string> hyp_p = {hyp[2], hyp[0], hyp[1]};
  const std::vector<std::string> ref_p = {ref[2], ref[0], ref[1]};
  CHECK(bleu(hyp, ref, kPretok).bleu == bleu(hyp_p, ref_p, kPretok).bleu);
  CHECK(chrfpp(hyp, ref, kPretokChrf).chrfpp ==
        chrfpp(hyp_p, ref_p, kPretokChrf).chrfpp);
}

TEST_CASE("brevity penalty follows the standard formula") {
  auto b = bleu({"il ragazzo"}, {"il ragazzo mangia"}, kPretok);
  CHECK(b.brevity_penalty == doctest::Approx(std::exp(1.0 - 3.0 / 2.0)).epsilon(1e-12));
  auto longer_ref = bleu({"il ragazzo"}, {"il ragazzo mangia pane oggi"}, kPretok);
  CHECK(longer_ref.brevity_penalty < b.brevity_penalty);
  CHECK(bleu({"il ragazzo mangia"}, {"il ragazzo"}, kPretok).brevity_penalty == 1.0);
}

TEST_CASE("scores stay within bounds on random corpora") {
  std::mt19937_64 rng(23);
  const std::vector<std::string> words = {"il", "la", "casa", "libro", "è",
                                          "bello", "oggi", "müt", "ćiasa"};
  auto sentence = [&] {
    std::string s;
    size_t len = 1 + rng() % 6;
    for (size_t i = 0; i < len; ++i) {
      if (i) s += ' ';
      s += words[rng() % words.size()];
    }
    return s;
  };
  for (int it = 0; it < 40; ++it) {
    size_t n = 1 + rng() % 4;
    std::vector<std::string> hyp, ref;
    for (size_t i = 0; i < n; ++i) {
      hyp.push_back(sentence());
      ref.push_back(sentence());
    }
    auto b = bleu(hyp, ref, kPretok);
    CHECK(b.bleu >= 0.0);
    CHECK(b.bleu <= 100.0);
    CHECK(b.brevity_penalty > 0.0);
    CHECK(b.brevity_penalty <= 1.0);
    for (double p : b.precisions) {
      CHECK(p >= 0.0);
      CHECK(p <= 100.0);
    }
    auto c = chrfpp(hyp, ref, kPretokChrf).chrfpp;
    CHECK(c >= 0.0);
    CHECK(c <= 100.0);
  }
}

TEST_CASE("inputs are validated") {
  CHECK_THROWS_WITH_AS(bleu({}, {}, kPretok), "empty corpus", Error);
  CHECK_THROWS_WITH_AS(chrfpp({}, {}, kPretokChrf), "empty corpus", Error);
  CHECK_THROWS_AS(bleu({"a", "b"}, {"a"}, kPretok), Error);
  CHECK_THROWS_AS(chrfpp({"a"}, {"a", "b"}, kPretokChrf), Error);
}

TEST_CASE("smoothing lifts zero higher-order precisions") {
  BleuOptions smooth = kPretok;
  smooth.smooth_k = 1.0;
  auto b = bleu({"the the the the"}, {"the cat"}, smooth);
  CHECK(b.bleu > 0.0);
  CHECK(b.bleu < 100.0);
  CHECK(b.precisions[1] == 25.0);  // (0+1)/(3+1)
  // Unigram precision is never smoothed.
  CHECK(b.precisions[0] == 25.0);
}

TEST_CASE("round trip through identity backends is lossless") {
  auto id = std::make_shared<IdentityBackend>();
  RttConfig cfg;
  cfg.forward = id;
  cfg.backward = id;
  cfg.batch_size = 2;
  cfg.worst = 2;
  const std::vector<std::string> sentences = {"Chësc liber é to.",
                                              "La flu é bela.", "Le müt é bun."};
  auto r = round_trip(cfg, sentences);
  CHECK(r.pivots == sentences);
  CHECK(r.outputs == sentences);
  CHECK(r.scores.bleu == 100.0);
  CHECK(r.scores.chrfpp == 100.0);
  REQUIRE(r.worst.size() == 2);
  CHECK(r.worst[0].second == 100.0);
}

TEST_CASE("round trip composes the two backends") {
  // Forward through the rule engine, backward through identity: the
  // round-trip score must equal scoring the forward output directly.
  RttConfig cfg;
  cfg.forward = rbmt_backend(false);
  cfg.backward = std::make_shared<IdentityBackend>();
  cfg.batch_size = 2;
  const std::vector<std::string> sentences = {
      "Chësc liber é to.", "La flu é bela.", "Le müt dorm incö."};
  auto r = round_trip(cfg, sentences);

  std::vector<std::string> forward_only;
  auto dict = dict_for(Direction::LvbToIta);
  auto rules = parse_rules_file(testutil::data_path("rules/lvb-ita.rules"));
  for (const auto& s : sentences)
    forward_only.push_back(translate(*dict, rules, s, Direction::LvbToIta).target_text);
  CHECK(r.pivots == forward_only);
  CHECK(r.outputs == forward_only);
  CHECK(r.scores.bleu == bleu(forward_only, sentences).bleu);
  CHECK(r.scores.chrfpp == chrfpp(forward_only, sentences).chrfpp);
}

TEST_CASE("full round trip reports offenders in rank order") {
  RttConfig cfg;
  cfg.forward = rbmt_backend(true);
  cfg.backward = cfg.forward;
  cfg.batch_size = 2;
  cfg.worst = 3;
  // The zz-words survive both legs only as unknown-marked tokens.
  const std::vector<std::string> sentences = {
      "Chësc liber é to.", "La flu é bela.", "Le zz1 zz2 zz3 zz4.",
      "Le müt é bun.", "Ël dorm incö."};
  auto r = round_trip(cfg, sentences);
  CHECK(r.pivots.size() == 5);
  CHECK(r.outputs.size() == 5);
  CHECK(r.scores.bleu >= 0.0);
  CHECK(r.scores.bleu <= 100.0);
  CHECK(r.scores.chrfpp > 0.0);
  REQUIRE(r.worst.size() == 3);
  for (size_t i = 1; i < r.worst.size(); ++i)
    CHECK(r.worst[i - 1].second <= r.worst[i].second);
  // The marker-riddled sentence is the worst offender.
  CHECK(r.worst[0].first == 2);
  CHECK(r.worst[0].second ==
        sentence_chrfpp(r.outputs[2], sentences[2]));

  // Sampling takes a prefix; batching must not change results.
  cfg.sample = 2;
  auto sampled = round_trip(cfg, sentences);
  CHECK(sampled.pivots.size() == 2);
  CHECK(sampled.pivots[0] == r.pivots[0]);
  cfg.sample = 0;
  cfg.batch_size = 64;
  auto onebatch = round_trip(cfg, sentences);
  CHECK(onebatch.outputs == r.outputs);
  CHECK(onebatch.scores.bleu == r.scores.bleu);
}

TEST_CASE("round trip surfaces backend faults") {
  RttConfig cfg;
  cfg.forward = std::make_shared<testutil::ScriptedBackend>();
  cfg.backward = std::make_shared<IdentityBackend>();
  CHECK_THROWS_AS(round_trip(cfg, {}), Error);

  auto broken = std::make_shared<testutil::ScriptedBackend>();
  broken->short_output = true;
  cfg.forward = broken;
  CHECK_THROWS_AS(round_trip(cfg, {"a", "b"}), BackendError);

  cfg.forward = nullptr;
  CHECK_THROWS_AS(round_trip(cfg, {"a"}), Error);
}
