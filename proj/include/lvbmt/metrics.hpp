#ifndef LVBMT_METRICS_HPP
#define LVBMT_METRICS_HPP

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lvbmt/backend.hpp"

namespace lvbmt {

struct MetricReport {
  double bleu = 0.0;    // 0-100
  double chrfpp = 0.0;  // 0-100
  std::array<double, 4> precisions{};  // BLEU modified precisions
  double brevity_penalty = 1.0;
  size_t hyp_length = 0;  // BLEU token counts
  size_t ref_length = 0;
  // Carried for externally computed language-model perplexity; this module
  // never fills it.
  std::optional<double> external_perplexity;
};

struct BleuOptions {
  bool pretokenized = false;  // whitespace split instead of the tokenizer
  double smooth_k = 0.0;      // add-k on orders >= 2; 0 = no smoothing
};

struct ChrfOptions {
  bool pretokenized = false;  // affects word n-grams only
  int char_order = 6;
  int word_order = 2;
  double beta = 2.0;
};

// Corpus-level scores; single reference per hypothesis. Throw on empty or
// mismatched lists.
MetricReport bleu(const std::vector<std::string>& hypotheses,
                  const std::vector<std::string>& references,
                  const BleuOptions& opts = {});

MetricReport chrfpp(const std::vector<std::string>& hypotheses,
                    const std::vector<std::string>& references,
                    const ChrfOptions& opts = {});

// Sentence-level chrF++ used to rank round-trip offenders.
double sentence_chrfpp(const std::string& hypothesis, const std::string& reference,
                       const ChrfOptions& opts = {});

struct RttConfig {
  BackendPtr forward;   // A: pivot direction
  BackendPtr backward;  // B: reverse direction
  Direction pivot = Direction::LvbToIta;
  size_t sample = 0;    // 0 = all sentences
  size_t batch_size = 16;
  size_t worst = 5;     // offenders listed in the report
};

struct RttReport {
  MetricReport scores;              // round-trip output vs originals
  std::vector<std::string> pivots;  // A's output
  std::vector<std::string> outputs; // B's output
  std::vector<std::pair<size_t, double>> worst;  // (index, sentence chrF++)
};

// X -> A -> Y -> B -> X', scored against the original X with both metrics.
RttReport round_trip(const RttConfig& config,
                     const std::vector<std::string>& sentences);

void write_metric_report(std::ostream& os, const MetricReport& r);

}  // namespace lvbmt

#endif
