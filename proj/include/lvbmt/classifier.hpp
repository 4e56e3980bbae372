#ifndef LVBMT_CLASSIFIER_HPP
#define LVBMT_CLASSIFIER_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "lvbmt/dictionary.hpp"  // Error
#include "lvbmt/gbt.hpp"

namespace lvbmt {

struct FeatureVocabulary {
  int n = 3;
  size_t top_k = 2500;
  // Descending train-set frequency, ties lexicographic; feature id = index.
  std::vector<std::pair<std::string, uint64_t>> grams;

  void rebuild_index();
  int32_t feature_id(const std::string& gram) const;  // -1 when absent

 private:
  std::unordered_map<std::string, uint32_t> index_;
};

struct ClassifierParams {
  int ngram = 3;
  size_t top_k = 2500;
  int rounds = 200;
  int max_depth = 4;
  double learning_rate = 0.1;
  size_t min_leaf = 5;
  double lambda = 1.0;
  double split = 0.75;
  uint64_t seed = 1;
};

struct VariantModel {
  FeatureVocabulary vocabulary;
  std::vector<std::string> labels;            // first-appearance order
  std::vector<std::vector<Tree>> ensemble;    // [label][round]
  ClassifierParams params;

  void dump(std::ostream& os) const;  // byte-stable text serialization
  void save(const std::string& path) const;
};

VariantModel load_variant_model(const std::string& path);
VariantModel parse_variant_model(std::istream& is, const std::string& name);

// Character n-grams of the lowercased, whitespace-normalized sentence,
// overlapping, boundary spaces included as characters.
std::vector<std::string> char_ngrams(const std::string& sentence, int n);

FeatureVocabulary build_vocabulary(const std::vector<std::string>& sentences,
                                   int n, size_t top_k);

// Sparse count vector over the vocabulary; sorted by feature id.
std::vector<std::pair<uint32_t, float>> featurize(const FeatureVocabulary& vocab,
                                                  const std::string& sentence);

struct LabeledSentence {
  std::string label;
  std::string text;
};

// Lines `<label>\t<sentence>`; blank lines skipped.
std::vector<LabeledSentence> read_labeled_tsv(const std::string& path);

struct TrainResult {
  VariantModel model;
  double heldout_accuracy = 0.0;
  size_t train_size = 0;
  size_t heldout_size = 0;
  // Mean logistic loss summed over labels, after each boosting round.
  std::vector<double> loss_curve;
};

// Seeded shuffle -> split; vocabulary from the training portion only;
// one-vs-rest logistic boosting. Throws on empty corpus, single-label
// corpus, or split outside (0,1).
TrainResult train_classifier(const std::vector<LabeledSentence>& corpus,
                             const ClassifierParams& params);

struct Prediction {
  std::string label;
  std::vector<double> scores;  // per-label sigmoid(margin), label order
};

Prediction predict_one(const VariantModel& model, const std::string& sentence);

struct PartitionCounts {
  // Per label, in model label order: (sentences, characters).
  std::vector<std::pair<size_t, size_t>> counts;
};

// Routes each input line to <outdir>/<label>.txt; returns the count table.
PartitionCounts partition(const VariantModel& model, std::istream& in,
                          const std::string& outdir);

void write_partition_counts(std::ostream& os, const VariantModel& model,
                            const PartitionCounts& counts);

}  // namespace lvbmt

#endif
