#ifndef LVBMT_GBT_HPP
#define LVBMT_GBT_HPP

#include <cstdint>
#include <vector>

namespace lvbmt {

// Row-major sparse count matrix; column indices strictly ascending per row.
class SparseMatrix {
 public:
  explicit SparseMatrix(uint32_t n_cols = 0) : n_cols_(n_cols) {}

  // `entries` must be sorted by column and free of duplicates.
  void add_row(const std::vector<std::pair<uint32_t, float>>& entries);

  size_t rows() const { return row_ptr_.size() - 1; }
  uint32_t cols() const { return n_cols_; }
  size_t nnz() const { return col_.size(); }

  // Value at (row, col); 0 when absent. Binary search over the row.
  float at(size_t row, uint32_t col) const;

  size_t row_begin(size_t row) const { return row_ptr_[row]; }
  size_t row_end(size_t row) const { return row_ptr_[row + 1]; }
  uint32_t entry_col(size_t k) const { return col_[k]; }
  float entry_val(size_t k) const { return val_[k]; }

 private:
  uint32_t n_cols_;
  std::vector<size_t> row_ptr_{0};
  std::vector<uint32_t> col_;
  std::vector<float> val_;
};

struct GbtParams {
  int max_depth = 4;
  double learning_rate = 0.1;
  double lambda = 1.0;   // L2 on leaf values
  size_t min_leaf = 5;   // minimum samples per child
  double min_gain = 1e-12;
};

struct TreeNode {
  int32_t feature = -1;  // -1 = leaf
  double threshold = 0.0;  // x[feature] < threshold goes left
  int32_t left = -1;
  int32_t right = -1;
  double value = 0.0;  // leaf output (learning rate already applied)
};

struct Tree {
  std::vector<TreeNode> nodes;
  double predict(const SparseMatrix& x, size_t row) const;
};

// One exact-greedy regression tree on (gradient, hessian) pairs.
// Split gain: GL^2/(HL+l) + GR^2/(HR+l) - G^2/(H+l); leaf: -G/(H+l) * lr.
// Deterministic: features scanned in index order, thresholds ascending,
// strictly-greater gain required to replace the incumbent split.
Tree fit_tree(const SparseMatrix& x, const std::vector<double>& grad,
              const std::vector<double>& hess, const GbtParams& params);

double sigmoid(double z);

}  // namespace lvbmt

#endif
