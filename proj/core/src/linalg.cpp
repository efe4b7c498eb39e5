#include "tmnet/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "tmnet/error.hpp"

namespace tmnet {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("{}x{} matrix given {} values", rows, cols,
                            data_.size()));
  }
}

Matrix Matrix::identity(std::size_t n) { return eye(n, n); }

Matrix Matrix::eye(std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < std::min(rows, cols); ++i) m(i, i) = 1.0;
  return m;
}

void Matrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && data_.empty()) {
    cols_ = values.size();
  } else if (values.size() != cols_) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("appending row of width {} to {} columns",
                            values.size(), cols_));
  }
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

Activation Activation::softmax_row(double gain) {
  if (!(gain > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "softmax gain must be positive");
  }
  return {Kind::kSoftmaxRow, gain};
}

Vector affine(const Matrix& weight, std::span<const double> bias,
              std::span<const double> x) {
  if (weight.cols() != x.size() || weight.rows() != bias.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("affine: W is {}x{}, b has {}, x has {}",
                            weight.rows(), weight.cols(), bias.size(),
                            x.size()));
  }
  Vector out(weight.rows());
  for (std::size_t i = 0; i < weight.rows(); ++i) {
    const auto w = weight.row(i);
    double acc = bias[i];
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (w[j] != 0.0) acc += w[j] * x[j];
    }
    out[i] = acc;
  }
  return out;
}

Vector matvec(const Matrix& weight, std::span<const double> x) {
  const Vector zero(weight.rows(), 0.0);
  return affine(weight, zero, x);
}

Vector softmax(std::span<const double> x, double gain) {
  Vector out(x.size());
  if (x.empty()) return out;
  double best = gain * x[0];
  for (double v : x) best = std::max(best, gain * v);
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = std::exp(gain * x[i] - best);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

Vector activate(const Activation& activation, Vector x) {
  switch (activation.kind) {
    case Activation::Kind::kIdentity:
      break;
    case Activation::Kind::kRelu:
      for (double& v : x) v = std::max(v, 0.0);
      break;
    case Activation::Kind::kSatlin:
      for (double& v : x) v = std::clamp(v, 0.0, 1.0);
      break;
    case Activation::Kind::kSoftmaxRow:
      return softmax(x, activation.gain);
  }
  return x;
}

LstsqResult lstsq(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("lstsq: A has {} rows, B has {}", a.rows(),
                            b.rows()));
  }
  using RowMajor =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMajor> ea(a.data().data(), a.rows(), a.cols());
  const Eigen::Map<const RowMajor> eb(b.data().data(), b.rows(), b.cols());
  const Eigen::MatrixXd dense_a = ea;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(dense_a);
  const int rank = static_cast<int>(qr.rank());
  if (rank < static_cast<int>(a.cols())) {
    throw Error(ErrorCode::kRankDeficientSystem,
                fmt::format("lstsq: rank {} < {} columns", rank, a.cols()));
  }
  const Eigen::MatrixXd x = qr.solve(Eigen::MatrixXd(eb));
  const double residual = (dense_a * x - Eigen::MatrixXd(eb)).norm();

  LstsqResult result;
  result.solution = Matrix(a.cols(), b.cols());
  for (std::size_t i = 0; i < a.cols(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      result.solution(i, j) = x(static_cast<Eigen::Index>(i),
                                static_cast<Eigen::Index>(j));
    }
  }
  result.residual = residual;
  result.rank = rank;
  return result;
}

}  // namespace tmnet
