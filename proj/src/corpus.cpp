#include "lvbmt/corpus.hpp"

#include <fstream>
#include <sstream>

namespace lvbmt {

namespace {

constexpr std::string_view kTagIta = ">>ita<< ";
constexpr std::string_view kTagLvb = ">>lld_Latn<< ";

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == '\t') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

std::string origin_name(Origin o) {
  switch (o) {
    case Origin::Authentic:
      return "authentic";
    case Origin::BackTranslated:
      return "back-translated";
    case Origin::ForwardTranslated:
      return "forward-translated";
  }
  return "";
}

std::optional<Origin> origin_from_string(std::string_view s) {
  if (s == "authentic") return Origin::Authentic;
  if (s == "back-translated") return Origin::BackTranslated;
  if (s == "forward-translated") return Origin::ForwardTranslated;
  return std::nullopt;
}

void validate_record(const CorpusRecord& r) {
  if (r.origin == Origin::Authentic && r.generator != "human")
    throw Error("authentic record with generator '" + r.generator + "'");
  if (r.origin != Origin::Authentic &&
      (r.generator.empty() || r.generator == "human"))
    throw Error("synthetic record must name its generator backend");
}

std::vector<CorpusRecord> read_parallel_tsv(const std::string& path,
                                            Direction direction) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open '" + path + "'");
  std::vector<CorpusRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto cols = split_tabs(line);
    if (cols.size() != 2 || cols[0].empty() || cols[1].empty())
      throw ParseError(path, lineno, "expected 'src<TAB>tgt'");
    CorpusRecord r;
    r.src = cols[0];
    r.tgt = cols[1];
    r.direction = direction;
    r.origin = Origin::Authentic;
    r.generator = "human";
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::string> read_mono_lines(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open '" + path + "'");
  std::vector<std::string> out;
  std::string line;
  while (std::getline(is, line)) {
    line = strip_cr(line);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

void write_records_tsv(std::ostream& os, const std::vector<CorpusRecord>& records) {
  for (const auto& r : records)
    os << r.src << "\t" << r.tgt << "\t" << direction_name(r.direction) << "\t"
       << origin_name(r.origin) << "\t" << r.generator << "\n";
}

void write_records_tsv_file(const std::string& path,
                            const std::vector<CorpusRecord>& records) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write '" + path + "'");
  write_records_tsv(os, records);
}

std::vector<CorpusRecord> read_records_tsv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open '" + path + "'");
  std::vector<CorpusRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto cols = split_tabs(line);
    if (cols.size() != 5)
      throw ParseError(path, lineno, "expected 5 tab-separated record fields");
    CorpusRecord r;
    r.src = cols[0];
    r.tgt = cols[1];
    auto dir = direction_from_string(cols[2]);
    if (!dir) throw ParseError(path, lineno, "unknown direction '" + cols[2] + "'");
    r.direction = *dir;
    auto origin = origin_from_string(cols[3]);
    if (!origin) throw ParseError(path, lineno, "unknown origin '" + cols[3] + "'");
    r.origin = *origin;
    r.generator = cols[4];
    validate_record(r);
    out.push_back(std::move(r));
  }
  return out;
}

TrainingEmitCounts emit_training_manifest(const std::vector<CorpusRecord>& records,
                                          std::ostream& os) {
  TrainingEmitCounts counts;
  auto emit = [&](Direction d, const std::string& src, const std::string& tgt) {
    if (direction_tgt(d) == "ita") {
      os << kTagIta << src << "\t" << tgt << "\n";
      ++counts.to_ita;
    } else {
      os << kTagLvb << src << "\t" << tgt << "\n";
      ++counts.to_lvb;
    }
  };
  for (const auto& r : records) {
    emit(r.direction, r.src, r.tgt);
    if (r.origin == Origin::Authentic) emit(reverse(r.direction), r.tgt, r.src);
  }
  return counts;
}

}  // namespace lvbmt
