#pragma once

// Dense row-major matrices and the handful of kernels the compiled
// networks need. Everything is 64-bit and summed in a fixed order so that
// traces are bit-reproducible.

#include <cstddef>
#include <span>
#include <vector>

namespace tmnet {

using Vector = std::vector<double>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix identity(std::size_t n);
  // n x m with ones on the leading diagonal.
  static Matrix eye(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  const std::vector<double>& data() const { return data_; }

  // Grows by one row; `values.size()` must equal cols() unless the matrix
  // has no rows yet, in which case it fixes the column count.
  void append_row(std::span<const double> values);

  bool all_finite() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Activation {
  enum class Kind { kIdentity, kRelu, kSatlin, kSoftmaxRow };

  Kind kind = Kind::kIdentity;
  double gain = 1.0;  // softmax only

  static Activation identity() { return {Kind::kIdentity, 1.0}; }
  static Activation relu() { return {Kind::kRelu, 1.0}; }
  static Activation satlin() { return {Kind::kSatlin, 1.0}; }
  // Throws kInvalidArgument unless gain > 0.
  static Activation softmax_row(double gain);

  friend bool operator==(const Activation&, const Activation&) = default;
};

// W x + b. Each output starts from b[i] and adds W[i][j] x[j] for j in
// increasing order; zero weights are skipped. Throws kDimensionMismatch.
Vector affine(const Matrix& weight, std::span<const double> bias,
              std::span<const double> x);
// W x, same accumulation order.
Vector matvec(const Matrix& weight, std::span<const double> x);

Vector activate(const Activation& activation, Vector x);

// softmax(gain * x), with the maximum subtracted before exponentiating.
Vector softmax(std::span<const double> x, double gain);

struct LstsqResult {
  Matrix solution;
  double residual = 0.0;  // Frobenius norm of A X - B
  int rank = 0;
};

// Minimizes ||A X - B||_F with a column-pivoting Householder QR.
// Throws kRankDeficientSystem when A lacks full column rank and
// kDimensionMismatch when the row counts differ.
LstsqResult lstsq(const Matrix& a, const Matrix& b);

}  // namespace tmnet
