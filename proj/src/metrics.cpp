#include "lvbmt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "lvbmt/text.hpp"

namespace lvbmt {

namespace {

std::vector<std::string> split_whitespace(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream iss(s);
  std::string w;
  while (iss >> w) out.push_back(w);
  return out;
}

std::vector<std::string> metric_tokens(const std::string& s, bool pretokenized) {
  if (pretokenized) return split_whitespace(s);
  std::vector<std::string> out;
  for (const auto& t : tokenize(s).tokens) out.push_back(t.text);
  return out;
}

void check_inputs(const std::vector<std::string>& hyp,
                  const std::vector<std::string>& ref) {
  if (hyp.size() != ref.size())
    throw Error("hypothesis/reference length mismatch: " +
                std::to_string(hyp.size()) + " vs " + std::to_string(ref.size()));
  if (hyp.empty()) throw Error("empty corpus");
}

using NgramCounts = std::map<std::vector<std::string>, size_t>;

NgramCounts count_ngrams(const std::vector<std::string>& tokens, size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (size_t i = 0; i + n <= tokens.size(); ++i)
    ++counts[{tokens.begin() + static_cast<long>(i),
              tokens.begin() + static_cast<long>(i + n)}];
  return counts;
}

struct OrderStats {
  size_t hyp = 0;
  size_t ref = 0;
  size_t match = 0;
};

OrderStats ngram_overlap(const std::vector<std::string>& hyp_tokens,
                         const std::vector<std::string>& ref_tokens, size_t n) {
  OrderStats s;
  auto hyp_counts = count_ngrams(hyp_tokens, n);
  auto ref_counts = count_ngrams(ref_tokens, n);
  for (const auto& [gram, c] : hyp_counts) {
    s.hyp += c;
    auto it = ref_counts.find(gram);
    if (it != ref_counts.end()) s.match += std::min(c, it->second);
  }
  for (const auto& [gram, c] : ref_counts) s.ref += c;
  return s;
}

// chrF character tokens: every non-whitespace codepoint, whitespace removed.
std::vector<std::string> char_tokens(const std::string& s) {
  std::vector<std::string> out;
  for (uint32_t cp : to_codepoints(s)) {
    if (is_space(cp)) continue;
    std::string one;
    encode_utf8(cp, one);
    out.push_back(std::move(one));
  }
  return out;
}

double f_beta(double precision, double recall, double beta) {
  double b2 = beta * beta;
  double denom = b2 * precision + recall;
  if (denom <= 0.0) return 0.0;
  return (1.0 + b2) * precision * recall / denom;
}

}  // namespace

MetricReport bleu(const std::vector<std::string>& hypotheses,
                  const std::vector<std::string>& references,
                  const BleuOptions& opts) {
  check_inputs(hypotheses, references);
  MetricReport report;
  std::array<size_t, 4> matches{};
  std::array<size_t, 4> totals{};
  size_t hyp_len = 0, ref_len = 0;
  for (size_t i = 0; i < hypotheses.size(); ++i) {
    auto hyp = metric_tokens(hypotheses[i], opts.pretokenized);
    auto ref = metric_tokens(references[i], opts.pretokenized);
    hyp_len += hyp.size();
    ref_len += ref.size();
    for (size_t n = 1; n <= 4; ++n) {
      auto s = ngram_overlap(hyp, ref, n);
      matches[n - 1] += s.match;
      totals[n - 1] += s.hyp;
    }
  }
  report.hyp_length = hyp_len;
  report.ref_length = ref_len;

  double log_sum = 0.0;
  bool zero = false;
  for (size_t n = 1; n <= 4; ++n) {
    double m = static_cast<double>(matches[n - 1]);
    double t = static_cast<double>(totals[n - 1]);
    if (n >= 2 && opts.smooth_k > 0.0) {
      m += opts.smooth_k;
      t += opts.smooth_k;
    }
    double p = t > 0.0 ? m / t : 0.0;
    report.precisions[n - 1] = p * 100.0;
    if (p <= 0.0)
      zero = true;
    else
      log_sum += std::log(p) / 4.0;
  }
  double c = static_cast<double>(hyp_len);
  double r = static_cast<double>(ref_len);
  report.brevity_penalty = c <= 0.0 ? 0.0 : (c > r ? 1.0 : std::exp(1.0 - r / c));
  report.bleu =
      zero || c <= 0.0 ? 0.0 : report.brevity_penalty * std::exp(log_sum) * 100.0;
  return report;
}

namespace {

// Aggregated per-order statistics for chrF++: char orders first, then word
// orders. The final score averages per-order F over the orders where either
// side produced n-grams.
double chrf_from_stats(const std::vector<OrderStats>& stats, double beta) {
  double sum = 0.0;
  size_t effective = 0;
  for (const auto& s : stats) {
    if (s.hyp == 0 && s.ref == 0) continue;
    ++effective;
    double precision = s.hyp > 0 ? static_cast<double>(s.match) / s.hyp : 0.0;
    double recall = s.ref > 0 ? static_cast<double>(s.match) / s.ref : 0.0;
    sum += f_beta(precision, recall, beta);
  }
  if (effective == 0) return 0.0;
  return sum / static_cast<double>(effective) * 100.0;
}

std::vector<OrderStats> chrf_stats(const std::vector<std::string>& hypotheses,
                                   const std::vector<std::string>& references,
                                   const ChrfOptions& opts) {
  std::vector<OrderStats> stats(
      static_cast<size_t>(opts.char_order + opts.word_order));
  for (size_t i = 0; i < hypotheses.size(); ++i) {
    auto hyp_chars = char_tokens(hypotheses[i]);
    auto ref_chars = char_tokens(references[i]);
    for (int n = 1; n <= opts.char_order; ++n) {
      auto s = ngram_overlap(hyp_chars, ref_chars, static_cast<size_t>(n));
      stats[static_cast<size_t>(n - 1)].hyp += s.hyp;
      stats[static_cast<size_t>(n - 1)].ref += s.ref;
      stats[static_cast<size_t>(n - 1)].match += s.match;
    }
    auto hyp_words = metric_tokens(hypotheses[i], opts.pretokenized);
    auto ref_words = metric_tokens(references[i], opts.pretokenized);
    for (int n = 1; n <= opts.word_order; ++n) {
      auto s = ngram_overlap(hyp_words, ref_words, static_cast<size_t>(n));
      size_t slot = static_cast<size_t>(opts.char_order + n - 1);
      stats[slot].hyp += s.hyp;
      stats[slot].ref += s.ref;
      stats[slot].match += s.match;
    }
  }
  return stats;
}

}  // namespace

MetricReport chrfpp(const std::vector<std::string>& hypotheses,
                    const std::vector<std::string>& references,
                    const ChrfOptions& opts) {
  check_inputs(hypotheses, references);
  MetricReport report;
  report.chrfpp = chrf_from_stats(chrf_stats(hypotheses, references, opts),
                                  opts.beta);
  for (size_t i = 0; i < hypotheses.size(); ++i) {
    report.hyp_length += char_tokens(hypotheses[i]).size();
    report.ref_length += char_tokens(references[i]).size();
  }
  return report;
}

double sentence_chrfpp(const std::string& hypothesis,
                       const std::string& reference, const ChrfOptions& opts) {
  return chrf_from_stats(chrf_stats({hypothesis}, {reference}, opts), opts.beta);
}

RttReport round_trip(const RttConfig& config,
                     const std::vector<std::string>& sentences) {
  if (!config.forward || !config.backward) throw Error("round trip needs two backends");
  if (sentences.empty()) throw Error("empty corpus");
  std::vector<std::string> originals = sentences;
  if (config.sample > 0 && config.sample < originals.size())
    originals.resize(config.sample);

  RttReport report;
  auto run = [&](Backend& backend, const std::vector<std::string>& input,
                 Direction d) {
    std::vector<std::string> output;
    output.reserve(input.size());
    size_t pos = 0;
    while (pos < input.size()) {
      size_t count = std::min(config.batch_size, input.size() - pos);
      std::vector<std::string> batch(input.begin() + static_cast<long>(pos),
                                     input.begin() + static_cast<long>(pos + count));
      auto translated = backend.translate_batch(batch, d);
      if (translated.size() != batch.size())
        throw BackendError("backend '" + backend.id() + "' returned " +
                               std::to_string(translated.size()) +
                               " outputs for " + std::to_string(batch.size()) +
                               " sources",
                           /*retryable=*/false);
      output.insert(output.end(), translated.begin(), translated.end());
      pos += count;
    }
    return output;
  };
  report.pivots = run(*config.forward, originals, config.pivot);
  report.outputs = run(*config.backward, report.pivots, reverse(config.pivot));

  report.scores = bleu(report.outputs, originals);
  report.scores.chrfpp = chrfpp(report.outputs, originals).chrfpp;

  std::vector<std::pair<size_t, double>> ranked;
  ranked.reserve(originals.size());
  for (size_t i = 0; i < originals.size(); ++i)
    ranked.emplace_back(i, sentence_chrfpp(report.outputs[i], originals[i]));
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) {
                     if (a.second != b.second) return a.second < b.second;
                     return a.first < b.first;
                   });
  if (ranked.size() > config.worst) ranked.resize(config.worst);
  report.worst = std::move(ranked);
  return report;
}

void write_metric_report(std::ostream& os, const MetricReport& r) {
  os << std::fixed << std::setprecision(2);
  os << "bleu\t" << r.bleu << "\n";
  os << "chrfpp\t" << r.chrfpp << "\n";
  for (size_t n = 0; n < r.precisions.size(); ++n)
    os << "precision_" << (n + 1) << "\t" << r.precisions[n] << "\n";
  os << "brevity_penalty\t" << std::setprecision(4) << r.brevity_penalty
     << std::setprecision(2) << "\n";
  os << "hyp_length\t" << r.hyp_length << "\n";
  os << "ref_length\t" << r.ref_length << "\n";
  if (r.external_perplexity)
    os << "external_perplexity\t" << *r.external_perplexity << "\n";
  os.unsetf(std::ios::fixed);
}

}  // namespace lvbmt
