#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace edaplan::gcn {

/// Row-major matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return std::span(data_).subspan(r * cols_, cols_); }
  std::span<const double> row(std::size_t r) const { return std::span(data_).subspan(r * cols_, cols_); }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  void resize(std::size_t rows, std::size_t cols) {
    rows_ = rows;
    cols_ = cols;
    data_.assign(rows * cols, 0.0);
  }
  void set_zero() { std::fill(data_.begin(), data_.end(), 0.0); }
  bool same_shape(const DenseMatrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  /// NaN/Inf hook: throws ContractViolation naming `what` if any entry is not finite.
  void check_finite(const char* what) const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// out = a * b, or out += a * b when `accumulate` is set (out must already have the
/// result shape). Every output element is reduced over the inner dimension in
/// ascending order, so a row's result does not depend on its position in `a`.
void gemm(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out, bool accumulate = false);

/// out = a^T * b (or +=), without materializing a^T.
void gemm_tn(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out, bool accumulate = false);

DenseMatrix transpose(const DenseMatrix& m);
void transpose_into(const DenseMatrix& m, DenseMatrix& out);

}  // namespace edaplan::gcn
