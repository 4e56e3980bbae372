#include <doctest.h>

#include <sstream>

#include "lvbmt/corpus.hpp"
#include "support/testutil.hpp"

using namespace lvbmt;

namespace {

CorpusRecord rec(std::string src, std::string tgt, Direction d, Origin o,
                 std::string gen) {
  CorpusRecord r;
  r.src = std::move(src);
  r.tgt = std::move(tgt);
  r.direction = d;
  r.origin = o;
  r.generator = std::move(gen);
  return r;
}

}  // namespace

TEST_CASE("origin names round-trip") {
  CHECK(origin_name(Origin::Authentic) == "authentic");
  CHECK(origin_name(Origin::BackTranslated) == "back-translated");
  CHECK(origin_name(Origin::ForwardTranslated) == "forward-translated");
  CHECK(origin_from_string("back-translated") == Origin::BackTranslated);
  CHECK_FALSE(origin_from_string("machine").has_value());
}

TEST_CASE("provenance invariants") {
  CHECK_NOTHROW(validate_record(
      rec("a", "b", Direction::LvbToIta, Origin::Authentic, "human")));
  CHECK_NOTHROW(validate_record(
      rec("a", "b", Direction::ItaToLvb, Origin::BackTranslated, "rbmt")));
  // Authentic data cannot claim a machine generator...
  CHECK_THROWS_AS(validate_record(rec("a", "b", Direction::LvbToIta,
                                      Origin::Authentic, "rbmt")),
                  Error);
  // ...and synthetic data must name one.
  CHECK_THROWS_AS(validate_record(rec("a", "b", Direction::LvbToIta,
                                      Origin::ForwardTranslated, "human")),
                  Error);
  CHECK_THROWS_AS(validate_record(rec("a", "b", Direction::LvbToIta,
                                      Origin::BackTranslated, "")),
                  Error);
}

TEST_CASE("parallel TSV reads as authentic pairs") {
  testutil::TempDir dir("parallel");
  testutil::write_file(dir.file("p.tsv"),
                       "Bun dé.\tBuongiorno.\n\nLe müt.\tIl ragazzo.\r\n");
  auto rows = read_parallel_tsv(dir.file("p.tsv"), Direction::LvbToIta);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].src == "Bun dé.");
  CHECK(rows[0].tgt == "Buongiorno.");
  CHECK(rows[0].origin == Origin::Authentic);
  CHECK(rows[0].generator == "human");
  CHECK(rows[1].tgt == "Il ragazzo.");  // CR stripped

  testutil::write_file(dir.file("bad.tsv"), "only one column\n");
  CHECK_THROWS_AS(read_parallel_tsv(dir.file("bad.tsv"), Direction::LvbToIta),
                  ParseError);
  testutil::write_file(dir.file("empty-col.tsv"), "\ttgt\n");
  CHECK_THROWS_AS(
      read_parallel_tsv(dir.file("empty-col.tsv"), Direction::LvbToIta),
      ParseError);
  CHECK_THROWS_AS(read_parallel_tsv(dir.file("absent.tsv"), Direction::LvbToIta),
                  Error);
}

TEST_CASE("record TSV round-trips all five fields") {
  std::vector<CorpusRecord> records = {
      rec("Bun dé.", "Buongiorno.", Direction::LvbToIta, Origin::Authentic,
          "human"),
      rec("Le müt.", "Il ragazzo.", Direction::ItaToLvb,
          Origin::BackTranslated, "rbmt"),
      rec("La flu.", "Il fiore.", Direction::LvbToIta,
          Origin::ForwardTranslated, "identity"),
  };
  testutil::TempDir dir("records");
  write_records_tsv_file(dir.file("r.tsv"), records);
  auto body = testutil::read_file(dir.file("r.tsv"));
  CHECK(body ==
        "Bun dé.\tBuongiorno.\tlvb-ita\tauthentic\thuman\n"
        "Le müt.\tIl ragazzo.\tita-lvb\tback-translated\trbmt\n"
        "La flu.\tIl fiore.\tlvb-ita\tforward-translated\tidentity\n");

  auto reread = read_records_tsv(dir.file("r.tsv"));
  REQUIRE(reread.size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(reread[i].src == records[i].src);
    CHECK(reread[i].tgt == records[i].tgt);
    CHECK(reread[i].direction == records[i].direction);
    CHECK(reread[i].origin == records[i].origin);
    CHECK(reread[i].generator == records[i].generator);
  }
}

TEST_CASE("record TSV rejects malformed rows") {
  testutil::TempDir dir("badrecords");
  testutil::write_file(dir.file("cols.tsv"), "a\tb\tlvb-ita\tauthentic\n");
  CHECK_THROWS_AS(read_records_tsv(dir.file("cols.tsv")), ParseError);
  testutil::write_file(dir.file("dir.tsv"), "a\tb\tdeu-ita\tauthentic\thuman\n");
  CHECK_THROWS_AS(read_records_tsv(dir.file("dir.tsv")), ParseError);
  testutil::write_file(dir.file("orig.tsv"), "a\tb\tlvb-ita\tguessed\thuman\n");
  CHECK_THROWS_AS(read_records_tsv(dir.file("orig.tsv")), ParseError);
  // Provenance is enforced on read, too.
  testutil::write_file(dir.file("prov.tsv"), "a\tb\tlvb-ita\tauthentic\trbmt\n");
  CHECK_THROWS_AS(read_records_tsv(dir.file("prov.tsv")), Error);
}

TEST_CASE("mono lines skip blanks and strip CR") {
  testutil::TempDir dir("mono");
  testutil::write_file(dir.file("m.txt"), "uno\n\ndue\r\n\n");
  CHECK(read_mono_lines(dir.file("m.txt")) ==
        std::vector<std::string>{"uno", "due"});
}

TEST_CASE("training manifest doubles authentic pairs only") {
  std::vector<CorpusRecord> records = {
      rec("Bun dé.", "Buongiorno.", Direction::LvbToIta, Origin::Authentic,
          "human"),
      rec("Il fiore.", "La flu.", Direction::ItaToLvb,
          Origin::BackTranslated, "rbmt"),
      rec("Le müt.", "Il ragazzo.", Direction::LvbToIta,
          Origin::ForwardTranslated, "rbmt"),
  };
  std::ostringstream os;
  auto counts = emit_training_manifest(records, os);
  CHECK(os.str() ==
        ">>ita<< Bun dé.\tBuongiorno.\n"
        ">>lld_Latn<< Buongiorno.\tBun dé.\n"
        ">>lld_Latn<< Il fiore.\tLa flu.\n"
        ">>ita<< Le müt.\tIl ragazzo.\n");
  CHECK(counts.to_ita == 2);
  CHECK(counts.to_lvb == 2);

  std::ostringstream empty;
  auto zero = emit_training_manifest({}, empty);
  CHECK(zero.to_ita == 0);
  CHECK(zero.to_lvb == 0);
  CHECK(empty.str().empty());
}
