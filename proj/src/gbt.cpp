#include "lvbmt/gbt.hpp"

#include <algorithm>
#include <cmath>

namespace lvbmt {

void SparseMatrix::add_row(const std::vector<std::pair<uint32_t, float>>& entries) {
  for (const auto& [c, v] : entries) {
    col_.push_back(c);
    val_.push_back(v);
  }
  row_ptr_.push_back(col_.size());
}

float SparseMatrix::at(size_t row, uint32_t col) const {
  size_t lo = row_ptr_[row], hi = row_ptr_[row + 1];
  auto it = std::lower_bound(col_.begin() + static_cast<long>(lo),
                             col_.begin() + static_cast<long>(hi), col);
  if (it != col_.begin() + static_cast<long>(hi) && *it == col)
    return val_[static_cast<size_t>(it - col_.begin())];
  return 0.0f;
}

double Tree::predict(const SparseMatrix& x, size_t row) const {
  size_t node = 0;
  while (nodes[node].feature >= 0) {
    float v = x.at(row, static_cast<uint32_t>(nodes[node].feature));
    node = static_cast<size_t>(v < nodes[node].threshold ? nodes[node].left
                                                         : nodes[node].right);
  }
  return nodes[node].value;
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

namespace {

struct FeatureEntry {
  float value;
  uint32_t sample;  // index into the node's sample list domain (global row id)
  double g;
  double h;
};

struct Builder {
  const SparseMatrix& x;
  const std::vector<double>& grad;
  const std::vector<double>& hess;
  const GbtParams& params;
  Tree tree;

  // Per-feature scratch, reused across nodes; `touched` lists the features
  // whose buckets are non-empty.
  std::vector<std::vector<FeatureEntry>> buckets;
  std::vector<uint32_t> touched;

  Builder(const SparseMatrix& x_, const std::vector<double>& g_,
          const std::vector<double>& h_, const GbtParams& p_)
      : x(x_), grad(g_), hess(h_), params(p_), buckets(x_.cols()) {}

  int32_t build(std::vector<uint32_t> samples, int depth) {
    double g_sum = 0, h_sum = 0;
    for (uint32_t s : samples) {
      g_sum += grad[s];
      h_sum += hess[s];
    }
    int32_t id = static_cast<int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    if (depth >= params.max_depth || samples.size() < 2 * params.min_leaf) {
      make_leaf(id, g_sum, h_sum);
      return id;
    }

    // Gather per-feature nonzero entries for this node.
    for (uint32_t f : touched) buckets[f].clear();
    touched.clear();
    for (uint32_t s : samples) {
      for (size_t k = x.row_begin(s); k < x.row_end(s); ++k) {
        uint32_t f = x.entry_col(k);
        if (buckets[f].empty()) touched.push_back(f);
        buckets[f].push_back(FeatureEntry{x.entry_val(k), s, grad[s], hess[s]});
      }
    }
    std::sort(touched.begin(), touched.end());

    const double parent_score = g_sum * g_sum / (h_sum + params.lambda);
    double best_gain = params.min_gain;
    uint32_t best_feature = 0;
    double best_threshold = 0;
    bool found = false;

    for (uint32_t f : touched) {
      auto& entries = buckets[f];
      std::sort(entries.begin(), entries.end(),
                [](const FeatureEntry& a, const FeatureEntry& b) {
                  if (a.value != b.value) return a.value < b.value;
                  return a.sample < b.sample;
                });
      // Zero-valued samples of this feature form the initial left group.
      double gl = g_sum, hl = h_sum;
      size_t nl = samples.size();
      for (const auto& e : entries) {
        gl -= e.g;
        hl -= e.h;
      }
      nl -= entries.size();
      // Walk distinct values ascending; candidate threshold sits between
      // value groups (x < t goes left).
      size_t i = 0;
      while (i < entries.size()) {
        if (nl >= params.min_leaf && samples.size() - nl >= params.min_leaf) {
          double prev = (i == 0) ? 0.0 : static_cast<double>(entries[i - 1].value);
          double threshold = (prev + static_cast<double>(entries[i].value)) / 2.0;
          double gr = g_sum - gl, hr = h_sum - hl;
          double gain = gl * gl / (hl + params.lambda) +
                        gr * gr / (hr + params.lambda) - parent_score;
          if (gain > best_gain) {
            best_gain = gain;
            best_feature = f;
            best_threshold = threshold;
            found = true;
          }
        }
        float v = entries[i].value;
        while (i < entries.size() && entries[i].value == v) {
          gl += entries[i].g;
          hl += entries[i].h;
          ++nl;
          ++i;
        }
      }
    }

    if (!found) {
      make_leaf(id, g_sum, h_sum);
      return id;
    }

    std::vector<uint32_t> left, right;
    left.reserve(samples.size());
    for (uint32_t s : samples) {
      if (x.at(s, best_feature) < best_threshold)
        left.push_back(s);
      else
        right.push_back(s);
    }
    tree.nodes[static_cast<size_t>(id)].feature = static_cast<int32_t>(best_feature);
    tree.nodes[static_cast<size_t>(id)].threshold = best_threshold;
    samples.clear();
    samples.shrink_to_fit();
    int32_t l = build(std::move(left), depth + 1);
    int32_t r = build(std::move(right), depth + 1);
    tree.nodes[static_cast<size_t>(id)].left = l;
    tree.nodes[static_cast<size_t>(id)].right = r;
    return id;
  }

  void make_leaf(int32_t id, double g_sum, double h_sum) {
    tree.nodes[static_cast<size_t>(id)].value =
        -g_sum / (h_sum + params.lambda) * params.learning_rate;
  }
};

}  // namespace

Tree fit_tree(const SparseMatrix& x, const std::vector<double>& grad,
              const std::vector<double>& hess, const GbtParams& params) {
  Builder b(x, grad, hess, params);
  std::vector<uint32_t> all(x.rows());
  for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<uint32_t>(i);
  b.build(std::move(all), 0);
  return b.tree;
}

}  // namespace lvbmt
