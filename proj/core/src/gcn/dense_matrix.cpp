#include "edaplan/gcn/dense_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "edaplan/errors.hpp"

namespace edaplan::gcn {

namespace {

inline double fmadd(double a, double b, double c) {
#if defined(__FMA__)
  return std::fma(a, b, c);
#else
  return a * b + c;
#endif
}

constexpr std::size_t kTileCols = 16;

// One tile of `Rows` output rows by kTileCols columns, accumulators kept in registers.
// With TransA, element (r, k) of the left operand is read from a[k * lda + r].
template <std::size_t Rows, bool TransA = false>
void tile_full(const double* __restrict a, std::size_t lda, const double* __restrict b, std::size_t ldb,
               double* __restrict c, std::size_t ldc, std::size_t depth, bool accumulate) {
  double acc[Rows][kTileCols];
  for (std::size_t r = 0; r < Rows; ++r) {
    for (std::size_t j = 0; j < kTileCols; ++j) acc[r][j] = accumulate ? c[r * ldc + j] : 0.0;
  }
  for (std::size_t k = 0; k < depth; ++k) {
    const double* brow = b + k * ldb;
#pragma GCC unroll 8
    for (std::size_t r = 0; r < Rows; ++r) {
      const double av = TransA ? a[k * lda + r] : a[r * lda + k];
#pragma GCC unroll 16
      for (std::size_t j = 0; j < kTileCols; ++j) acc[r][j] = fmadd(av, brow[j], acc[r][j]);
    }
  }
  for (std::size_t r = 0; r < Rows; ++r) {
    for (std::size_t j = 0; j < kTileCols; ++j) c[r * ldc + j] = acc[r][j];
  }
}

// Column remainder (fewer than kTileCols columns), same per-element reduction order.
template <bool TransA = false>
void tile_partial(const double* a, std::size_t lda, const double* b, std::size_t ldb, double* c,
                  std::size_t ldc, std::size_t rows, std::size_t cols, std::size_t depth, bool accumulate) {
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < cols; ++j) {
      double acc = accumulate ? c[r * ldc + j] : 0.0;
      for (std::size_t k = 0; k < depth; ++k) {
        acc = fmadd(TransA ? a[k * lda + r] : a[r * lda + k], b[k * ldb + j], acc);
      }
      c[r * ldc + j] = acc;
    }
  }
}

template <bool TransA>
void gemm_driver(const double* pa, const double* pb, double* pc, std::size_t n, std::size_t depth, std::size_t m,
                 bool accumulate) {
  // Row offsets into the left operand: rows are columns of the stored matrix when transposed.
  const std::size_t lda = TransA ? n : depth;
  auto row_ptr = [&](std::size_t i) { return TransA ? pa + i : pa + i * depth; };
  const std::size_t full_cols = m - m % kTileCols;

  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    for (std::size_t j = 0; j < full_cols; j += kTileCols) {
      tile_full<8, TransA>(row_ptr(i), lda, pb + j, m, pc + i * m + j, m, depth, accumulate);
    }
  }
  // Row remainder in 4/2/1 blocks: a lone row keeps only two accumulators in
  // flight and runs several times slower per element.
  if (i + 4 <= n) {
    for (std::size_t j = 0; j < full_cols; j += kTileCols) {
      tile_full<4, TransA>(row_ptr(i), lda, pb + j, m, pc + i * m + j, m, depth, accumulate);
    }
    i += 4;
  }
  if (i + 2 <= n) {
    for (std::size_t j = 0; j < full_cols; j += kTileCols) {
      tile_full<2, TransA>(row_ptr(i), lda, pb + j, m, pc + i * m + j, m, depth, accumulate);
    }
    i += 2;
  }
  for (; i < n; ++i) {
    for (std::size_t j = 0; j < full_cols; j += kTileCols) {
      tile_full<1, TransA>(row_ptr(i), lda, pb + j, m, pc + i * m + j, m, depth, accumulate);
    }
  }
  if (full_cols < m) {
    tile_partial<TransA>(pa, lda, pb + full_cols, m, pc + full_cols, m, n, m - full_cols, depth, accumulate);
  }
}

void prepare_out(std::size_t rows, std::size_t cols, DenseMatrix& out, bool accumulate) {
  if (accumulate) {
    if (out.rows() != rows || out.cols() != cols) throw ContractViolation("gemm: accumulator has the wrong shape");
  } else {
    out.resize(rows, cols);
  }
}

}  // namespace

void DenseMatrix::check_finite(const char* what) const {
  for (double v : data_) {
    if (!std::isfinite(v)) throw ContractViolation(std::string("non-finite value in ") + what);
  }
}

void gemm(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out, bool accumulate) {
  if (a.cols() != b.rows()) {
    throw ContractViolation("gemm: inner dimensions differ (" + std::to_string(a.cols()) + " vs " +
                            std::to_string(b.rows()) + ")");
  }
  prepare_out(a.rows(), b.cols(), out, accumulate);
  gemm_driver<false>(a.values().data(), b.values().data(), out.values().data(), a.rows(), a.cols(), b.cols(),
                     accumulate);
}

void gemm_tn(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out, bool accumulate) {
  if (a.rows() != b.rows()) {
    throw ContractViolation("gemm_tn: inner dimensions differ (" + std::to_string(a.rows()) + " vs " +
                            std::to_string(b.rows()) + ")");
  }
  prepare_out(a.cols(), b.cols(), out, accumulate);
  gemm_driver<true>(a.values().data(), b.values().data(), out.values().data(), a.cols(), a.rows(), b.cols(),
                    accumulate);
}

DenseMatrix transpose(const DenseMatrix& m) {
  DenseMatrix t;
  transpose_into(m, t);
  return t;
}

void transpose_into(const DenseMatrix& m, DenseMatrix& t) {
  // 16x16 blocks keep both the reads and the strided writes in cache.
  constexpr std::size_t kBlock = 16;
  t.resize(m.cols(), m.rows());
  for (std::size_t r0 = 0; r0 < m.rows(); r0 += kBlock) {
    const std::size_t r1 = std::min(m.rows(), r0 + kBlock);
    for (std::size_t c0 = 0; c0 < m.cols(); c0 += kBlock) {
      const std::size_t c1 = std::min(m.cols(), c0 + kBlock);
      for (std::size_t r = r0; r < r1; ++r) {
        for (std::size_t c = c0; c < c1; ++c) t(c, r) = m(r, c);
      }
    }
  }
}

}  // namespace edaplan::gcn
