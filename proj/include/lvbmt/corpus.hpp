#ifndef LVBMT_CORPUS_HPP
#define LVBMT_CORPUS_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lvbmt/transfer.hpp"  // Direction, Error

namespace lvbmt {

enum class Origin { Authentic, BackTranslated, ForwardTranslated };

std::string origin_name(Origin o);
std::optional<Origin> origin_from_string(std::string_view s);

struct CorpusRecord {
  std::string src;
  std::string tgt;
  Direction direction = Direction::LvbToIta;
  Origin origin = Origin::Authentic;
  std::string generator = "human";
};

// Enforces the provenance invariants: authentic <=> generator "human";
// synthetic records must name their generator.
void validate_record(const CorpusRecord& r);

// Plain parallel TSV `src<TAB>tgt`, read as authentic pairs of the given
// direction (src column is the direction's source language).
std::vector<CorpusRecord> read_parallel_tsv(const std::string& path,
                                            Direction direction);

// One sentence per line; blank lines skipped.
std::vector<std::string> read_mono_lines(const std::string& path);

// Structured record TSV: src, tgt, direction, origin, generator.
void write_records_tsv(std::ostream& os, const std::vector<CorpusRecord>& records);
void write_records_tsv_file(const std::string& path,
                            const std::vector<CorpusRecord>& records);
std::vector<CorpusRecord> read_records_tsv(const std::string& path);

struct TrainingEmitCounts {
  size_t to_ita = 0;  // lines tagged >>ita<<
  size_t to_lvb = 0;  // lines tagged >>lld_Latn<<
};

// Tagged bidirectional training file: `>>ita<< src<TAB>tgt` /
// `>>lld_Latn<< src<TAB>tgt`. Authentic pairs are usable in both
// directions and emitted twice (sides swapped); synthetic pairs only in
// their stored direction.
TrainingEmitCounts emit_training_manifest(const std::vector<CorpusRecord>& records,
                                          std::ostream& os);

}  // namespace lvbmt

#endif
