#include "lvbmt/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "lvbmt/rng.hpp"
#include "lvbmt/text.hpp"

namespace lvbmt {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double clamp_prob(double p) {
  const double eps = 1e-15;
  return std::min(1.0 - eps, std::max(eps, p));
}

}  // namespace

void FeatureVocabulary::rebuild_index() {
  index_.clear();
  index_.reserve(grams.size() * 2);
  for (uint32_t i = 0; i < grams.size(); ++i) index_[grams[i].first] = i;
}

int32_t FeatureVocabulary::feature_id(const std::string& gram) const {
  auto it = index_.find(gram);
  return it == index_.end() ? -1 : static_cast<int32_t>(it->second);
}

std::vector<std::string> char_ngrams(const std::string& sentence, int n) {
  std::vector<std::string> out;
  auto cps = to_codepoints(normalize_whitespace_lower(sentence));
  if (cps.size() < static_cast<size_t>(n)) return out;
  for (size_t i = 0; i + static_cast<size_t>(n) <= cps.size(); ++i) {
    std::vector<uint32_t> window(cps.begin() + static_cast<long>(i),
                                 cps.begin() + static_cast<long>(i) + n);
    out.push_back(from_codepoints(window));
  }
  return out;
}

FeatureVocabulary build_vocabulary(const std::vector<std::string>& sentences,
                                   int n, size_t top_k) {
  std::map<std::string, uint64_t> counts;  // ordered: lexicographic ties for free
  for (const auto& s : sentences)
    for (auto& g : char_ngrams(s, n)) ++counts[g];
  FeatureVocabulary vocab;
  vocab.n = n;
  vocab.top_k = top_k;
  vocab.grams.assign(counts.begin(), counts.end());
  std::stable_sort(vocab.grams.begin(), vocab.grams.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (vocab.grams.size() > top_k) vocab.grams.resize(top_k);
  vocab.rebuild_index();
  return vocab;
}

std::vector<std::pair<uint32_t, float>> featurize(const FeatureVocabulary& vocab,
                                                  const std::string& sentence) {
  std::map<uint32_t, float> counts;
  for (auto& g : char_ngrams(sentence, vocab.n)) {
    int32_t id = vocab.feature_id(g);
    if (id >= 0) counts[static_cast<uint32_t>(id)] += 1.0f;
  }
  return {counts.begin(), counts.end()};
}

std::vector<LabeledSentence> read_labeled_tsv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open '" + path + "'");
  std::vector<LabeledSentence> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      throw ParseError(path, lineno, "expected '<label>\\t<sentence>'");
    out.push_back(LabeledSentence{line.substr(0, tab), line.substr(tab + 1)});
  }
  return out;
}

TrainResult train_classifier(const std::vector<LabeledSentence>& corpus,
                             const ClassifierParams& params) {
  if (corpus.empty()) throw Error("empty corpus");
  if (!(params.split > 0.0 && params.split < 1.0))
    throw Error("split must be in (0,1)");

  std::vector<std::string> labels;
  for (const auto& s : corpus)
    if (std::find(labels.begin(), labels.end(), s.label) == labels.end())
      labels.push_back(s.label);
  if (labels.size() < 2) throw Error("single-label corpus");

  const size_t n = corpus.size();
  std::vector<size_t> idx(n);
  for (size_t i = 0; i < n; ++i) idx[i] = i;
  std::mt19937_64 rng(params.seed);
  deterministic_shuffle(idx, rng);

  auto n_train = static_cast<size_t>(std::llround(params.split * static_cast<double>(n)));
  n_train = std::max<size_t>(1, std::min(n - 1, n_train));

  std::vector<std::string> train_sentences;
  train_sentences.reserve(n_train);
  for (size_t i = 0; i < n_train; ++i) train_sentences.push_back(corpus[idx[i]].text);

  TrainResult result;
  result.train_size = n_train;
  result.heldout_size = n - n_train;
  VariantModel& model = result.model;
  model.labels = labels;
  model.params = params;
  model.vocabulary = build_vocabulary(train_sentences, params.ngram, params.top_k);

  const auto n_features = static_cast<uint32_t>(model.vocabulary.grams.size());
  SparseMatrix x_train(n_features);
  for (size_t i = 0; i < n_train; ++i)
    x_train.add_row(featurize(model.vocabulary, corpus[idx[i]].text));

  const size_t k = labels.size();
  std::vector<std::vector<double>> y(k, std::vector<double>(n_train, 0.0));
  for (size_t i = 0; i < n_train; ++i) {
    const auto& label = corpus[idx[i]].label;
    auto pos = static_cast<size_t>(
        std::find(labels.begin(), labels.end(), label) - labels.begin());
    y[pos][i] = 1.0;
  }

  GbtParams gp;
  gp.max_depth = params.max_depth;
  gp.learning_rate = params.learning_rate;
  gp.lambda = params.lambda;
  gp.min_leaf = params.min_leaf;

  std::vector<std::vector<double>> margins(k, std::vector<double>(n_train, 0.0));
  model.ensemble.assign(k, {});
  std::vector<double> grad(n_train), hess(n_train);
  for (int round = 0; round < params.rounds; ++round) {
    for (size_t l = 0; l < k; ++l) {
      for (size_t i = 0; i < n_train; ++i) {
        double p = sigmoid(margins[l][i]);
        grad[i] = p - y[l][i];
        hess[i] = p * (1.0 - p);
      }
      Tree tree = fit_tree(x_train, grad, hess, gp);
      for (size_t i = 0; i < n_train; ++i)
        margins[l][i] += tree.predict(x_train, i);
      model.ensemble[l].push_back(std::move(tree));
    }
    double loss = 0.0;
    for (size_t l = 0; l < k; ++l) {
      double ll = 0.0;
      for (size_t i = 0; i < n_train; ++i) {
        double p = clamp_prob(sigmoid(margins[l][i]));
        ll -= y[l][i] > 0.5 ? std::log(p) : std::log(1.0 - p);
      }
      loss += ll / static_cast<double>(n_train);
    }
    result.loss_curve.push_back(loss);
  }

  size_t correct = 0;
  for (size_t i = n_train; i < n; ++i) {
    auto pred = predict_one(model, corpus[idx[i]].text);
    if (pred.label == corpus[idx[i]].label) ++correct;
  }
  result.heldout_accuracy = result.heldout_size == 0
                                ? 0.0
                                : static_cast<double>(correct) /
                                      static_cast<double>(result.heldout_size);
  return result;
}

Prediction predict_one(const VariantModel& model, const std::string& sentence) {
  SparseMatrix x(static_cast<uint32_t>(model.vocabulary.grams.size()));
  x.add_row(featurize(model.vocabulary, sentence));
  Prediction p;
  p.scores.resize(model.labels.size());
  size_t best = 0;
  for (size_t l = 0; l < model.labels.size(); ++l) {
    double margin = 0.0;
    for (const auto& tree : model.ensemble[l]) margin += tree.predict(x, 0);
    p.scores[l] = sigmoid(margin);
    if (p.scores[l] > p.scores[best]) best = l;  // ties keep earliest label
  }
  p.label = model.labels[best];
  return p;
}

// ---------------------------------------------------------------------------
// Serialization

void VariantModel::dump(std::ostream& os) const {
  os << "lvbmt-variant-model 1\n";
  os << "ngram " << params.ngram << "\n";
  os << "topk " << params.top_k << "\n";
  os << "seed " << params.seed << "\n";
  os << "rounds " << params.rounds << "\n";
  os << "depth " << params.max_depth << "\n";
  os << "lr " << fmt_double(params.learning_rate) << "\n";
  os << "min_leaf " << params.min_leaf << "\n";
  os << "lambda " << fmt_double(params.lambda) << "\n";
  os << "split " << fmt_double(params.split) << "\n";
  os << "labels " << labels.size() << "\n";
  for (const auto& l : labels) os << "l " << l << "\n";
  os << "vocab " << vocabulary.grams.size() << "\n";
  for (const auto& [gram, freq] : vocabulary.grams)
    os << "g " << freq << " " << gram << "\n";
  for (size_t l = 0; l < ensemble.size(); ++l) {
    for (size_t r = 0; r < ensemble[l].size(); ++r) {
      const Tree& t = ensemble[l][r];
      os << "tree " << l << " " << r << " " << t.nodes.size() << "\n";
      for (const auto& n : t.nodes)
        os << "n " << n.feature << " " << fmt_double(n.threshold) << " "
           << n.left << " " << n.right << " " << fmt_double(n.value) << "\n";
    }
  }
  os << "end\n";
}

void VariantModel::save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write '" + path + "'");
  dump(os);
}

namespace {

std::string expect_line(std::istream& is, const std::string& name, int& lineno) {
  std::string line;
  if (!std::getline(is, line))
    throw ParseError(name, lineno, "unexpected end of model file");
  ++lineno;
  return line;
}

template <typename T>
T parse_kv(const std::string& line, const std::string& key,
           const std::string& name, int lineno) {
  std::istringstream iss(line);
  std::string k;
  T v;
  if (!(iss >> k >> v) || k != key)
    throw ParseError(name, lineno, "expected '" + key + " <value>'");
  return v;
}

}  // namespace

VariantModel parse_variant_model(std::istream& is, const std::string& name) {
  int lineno = 0;
  if (expect_line(is, name, lineno) != "lvbmt-variant-model 1")
    throw Error(name + ": not a variant model (bad header)");
  VariantModel m;
  m.params.ngram = parse_kv<int>(expect_line(is, name, lineno), "ngram", name, lineno);
  m.params.top_k = parse_kv<size_t>(expect_line(is, name, lineno), "topk", name, lineno);
  m.params.seed = parse_kv<uint64_t>(expect_line(is, name, lineno), "seed", name, lineno);
  m.params.rounds = parse_kv<int>(expect_line(is, name, lineno), "rounds", name, lineno);
  m.params.max_depth = parse_kv<int>(expect_line(is, name, lineno), "depth", name, lineno);
  m.params.learning_rate = parse_kv<double>(expect_line(is, name, lineno), "lr", name, lineno);
  m.params.min_leaf = parse_kv<size_t>(expect_line(is, name, lineno), "min_leaf", name, lineno);
  m.params.lambda = parse_kv<double>(expect_line(is, name, lineno), "lambda", name, lineno);
  m.params.split = parse_kv<double>(expect_line(is, name, lineno), "split", name, lineno);
  auto n_labels = parse_kv<size_t>(expect_line(is, name, lineno), "labels", name, lineno);
  for (size_t i = 0; i < n_labels; ++i) {
    std::string line = expect_line(is, name, lineno);
    if (line.rfind("l ", 0) != 0)
      throw ParseError(name, lineno, "expected 'l <label>'");
    m.labels.push_back(line.substr(2));
  }
  m.vocabulary.n = m.params.ngram;
  m.vocabulary.top_k = m.params.top_k;
  auto n_vocab = parse_kv<size_t>(expect_line(is, name, lineno), "vocab", name, lineno);
  for (size_t i = 0; i < n_vocab; ++i) {
    std::string line = expect_line(is, name, lineno);
    if (line.rfind("g ", 0) != 0)
      throw ParseError(name, lineno, "expected 'g <freq> <gram>'");
    size_t sp = line.find(' ', 2);
    if (sp == std::string::npos)
      throw ParseError(name, lineno, "malformed vocabulary line");
    uint64_t freq = std::stoull(line.substr(2, sp - 2));
    m.vocabulary.grams.emplace_back(line.substr(sp + 1), freq);
  }
  m.vocabulary.rebuild_index();
  m.ensemble.assign(m.labels.size(), {});
  for (;;) {
    std::string line = expect_line(is, name, lineno);
    if (line == "end") break;
    std::istringstream iss(line);
    std::string kw;
    size_t label, round, n_nodes;
    if (!(iss >> kw >> label >> round >> n_nodes) || kw != "tree")
      throw ParseError(name, lineno, "expected 'tree <label> <round> <nodes>' or 'end'");
    if (label >= m.labels.size())
      throw ParseError(name, lineno, "tree label index out of range");
    if (round != m.ensemble[label].size())
      throw ParseError(name, lineno, "tree rounds out of order");
    Tree t;
    for (size_t i = 0; i < n_nodes; ++i) {
      std::string nline = expect_line(is, name, lineno);
      std::istringstream niss(nline);
      std::string nk;
      TreeNode node;
      if (!(niss >> nk >> node.feature >> node.threshold >> node.left >>
            node.right >> node.value) ||
          nk != "n")
        throw ParseError(name, lineno, "malformed node line");
      t.nodes.push_back(node);
    }
    if (t.nodes.empty()) throw ParseError(name, lineno, "empty tree");
    m.ensemble[label].push_back(std::move(t));
  }
  return m;
}

VariantModel load_variant_model(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open '" + path + "'");
  return parse_variant_model(is, path);
}

// ---------------------------------------------------------------------------
// Partition

PartitionCounts partition(const VariantModel& model, std::istream& in,
                          const std::string& outdir) {
  std::vector<std::ofstream> files;
  files.reserve(model.labels.size());
  for (const auto& label : model.labels) {
    files.emplace_back(outdir + "/" + label + ".txt", std::ios::binary);
    if (!files.back())
      throw Error("cannot write '" + outdir + "/" + label + ".txt'");
  }
  PartitionCounts counts;
  counts.counts.assign(model.labels.size(), {0, 0});
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto pred = predict_one(model, line);
    auto l = static_cast<size_t>(
        std::find(model.labels.begin(), model.labels.end(), pred.label) -
        model.labels.begin());
    files[l] << line << "\n";
    counts.counts[l].first += 1;
    counts.counts[l].second += codepoint_count(line);
  }
  return counts;
}

void write_partition_counts(std::ostream& os, const VariantModel& model,
                            const PartitionCounts& counts) {
  os << "label\tsentences\tcharacters\n";
  for (size_t l = 0; l < model.labels.size(); ++l)
    os << model.labels[l] << "\t" << counts.counts[l].first << "\t"
       << counts.counts[l].second << "\n";
}

}  // namespace lvbmt
